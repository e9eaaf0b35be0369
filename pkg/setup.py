#!/usr/bin/env python
# -*- coding: utf-8 -*-

from setuptools import setup, find_packages

requirements = [
    "argh",
    "attrs",
    "related",

    # config
    "gin-config",

    # numerics
    "numpy>=1.17",  # Philox / SeedSequence
    "pandas",
    "scipy>=1.8",  # linprog(method='highs')
    "statsmodels",

    "joblib",

    # utils
    "tqdm",
]

test_requirements = [
    "pytest>=3.3.1",
    "pytest-cov>=2.6.1",
]


setup(
    name="latticeldp",
    version='0.1.0',
    description=("latticeldp: rate functions, action minimization and Monte Carlo checks of"
                 " sample-path large deviations for Markov chains on ε-lattices"),
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=requirements,
    extras_require={
        "dev": test_requirements,
    },
    license="MIT license",
    entry_points={'console_scripts': ['latticeldp = latticeldp.__main__:main']},
    zip_safe=False,
    keywords=["large deviations",
              "Markov chains",
              "Legendre transform",
              "importance sampling"],
    test_suite="tests",
    package_data={'latticeldp': ['logging.conf']},
    include_package_data=True,
    tests_require=test_requirements
)
