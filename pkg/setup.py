#!/usr/bin/env python
import sys

from setuptools import setup, find_packages

try:
    from setuptools.command.test import test as TestCommand
except ImportError:
    # setuptools >= 72 dropped the test command
    TestCommand = None

cmdclass = {}

if TestCommand is not None:
    class PyTest(TestCommand):
        user_options = [('pytest-args=', 'a', "Arguments to pass to py.test")]

        def initialize_options(self):
            TestCommand.initialize_options(self)
            self.pytest_args = []

        def finalize_options(self):
            TestCommand.finalize_options(self)
            self.test_args = []
            self.test_suite = True

        def run_tests(self):
            import pytest
            errno = pytest.main(self.pytest_args)
            sys.exit(errno)

    cmdclass['test'] = PyTest


pkgs = find_packages(exclude=['examples', 'examples.*'])

setup(
    name='polyaurns',
    version='0.1.0',
    description='Generalized Polya urns: exact semiring algebra, spectra and simulation',
    ext_modules=[],
    packages=pkgs,
    python_requires='>=3.9',
    tests_require=['pytest>=7', 'hypothesis>=6'],
    extras_require={'test': ['pytest>=7', 'hypothesis>=6']},
    cmdclass=cmdclass,
    scripts=[],
    data_files=[],
    install_requires=[
        'msgpack>=1.0',
        'numpy>=1.22',
        'scipy>=1.8',
        'networkx>=2.8',
    ],
    entry_points={
        'console_scripts': ['polyaurns=polyaurns.cli:main'],
    },
    test_suite="polyaurns.tests",
    platforms='any',
    license='MIT',
    classifiers=[
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
    ]
)
