
class InvalidArgument(ValueError):
    pass

class EmptyDataset(InvalidArgument):
    pass

class InvalidStart(InvalidArgument):
    """
    Objective is not finite at the starting point
    """
    pass

class UnsupportedOperation(NotImplementedError):
    pass

class ParseError(ValueError):
    def __init__(self, line, message):
        ValueError.__init__(self, "line %d: %s" % (line, message))
        self.line = line

class ValidationError(ValueError):
    pass

class FatalError(Exception):
    """
    Exception to be raised when user intervention is required
    """
    pass

class ConfigError(FatalError):
    pass

class BatteryFailure(FatalError):
    pass
