#!/usr/bin/env python

from setuptools import find_packages, setup

from lp_sensitivity_lib.constants import APP_VERSION

long_description = """
Best- and worst-case optimal values of a linear program whose objective
and right-hand side range over a convex uncertainty set.
"""

setup(
    name="lp-sensitivity-lib",
    version=APP_VERSION,
    packages=find_packages(exclude=["tests"]),
    description="Copositive/SDP sensitivity bounds for linear programs",
    long_description=long_description,
    install_requires=[
        "numpy", "scipy", "cvxpy", "pyxdg", "Jinja2"
    ],
    extras_require={
        "test": ["pytest", "pytest-cov"],
    },
    entry_points={
        "console_scripts": [
            "lp-sensitivity=lp_sensitivity_lib.cli:main",
        ],
    },
    package_data={
        "lp_sensitivity_lib": [
            "templates/*.j2",
            "instances/*.json",
            "instances/expected/*.json",
        ],
    },
    include_package_data=True,
    license="GPLv3",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: GNU General Public License v3 (GPLv3)",
        "Programming Language :: Python :: 3 :: Only",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
    ],
)
