#!/usr/bin/env python3
# coding: utf-8
import os
from setuptools import setup, find_packages

here = os.path.dirname(__file__)

with open(os.path.join(here, "requirements.txt")) as fh:
    requirements = [j.strip() for j in fh if j.strip() and not j.startswith("#")]

setup(
    name = "reuploader",
    version = "0.1.0",
    author = "reuploader developers",
    description = "Single-qubit data re-uploading classifier, hand-written minimizers and a reproducible accuracy benchmark",
    license = "MIT",
    keywords = "qubit classifier re-uploading fidelity trace-distance nelder-mead lbfgs cobyla slsqp",
    packages = find_packages(exclude=["tests"]),
    long_description = open(os.path.join(here, "README.rst")).read(),
    python_requires = ">=3.6",
    install_requires = requirements,
    extras_require = {
        "test": ["pytest", "coverage"],
    },
    scripts = ["misc/reuploader"],
    include_package_data = True,
    package_data = {
        "reuploader": ["templates/plot/*.svg", "sql/sqlite/*.sql"],
    },
    classifiers = [
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3 :: Only",
        "Topic :: Scientific/Engineering :: Physics",
    ],
)
