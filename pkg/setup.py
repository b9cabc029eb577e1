#!/usr/bin/env python

from __future__ import print_function
from setuptools import setup
from setuptools import find_packages
from setuptools.command.test import test as TestCommand
import io
import os
import sys


here = os.path.abspath(os.path.dirname(__file__))


def read(*filenames, **kwargs):
    encoding = kwargs.get('encoding', 'utf-8')
    sep = kwargs.get('sep', '\n\n')
    buf = []
    for filename in filenames:
        with io.open(filename, encoding=encoding) as f:
            buf.append(f.read())
    return sep.join(buf)


class PyTest(TestCommand):
    def finalize_options(self):
        TestCommand.finalize_options(self)
        self.test_args = []
        self.test_suite = True

    def run_tests(self):
        import pytest
        errcode = pytest.main(self.test_args)
        sys.exit(errcode)

about = {}
initfile = os.path.join(here, 'src', 'robquant', '__init__.py')
with open(initfile) as fp:
    exec(fp.read(), about)

long_description = read('README.rst', 'HISTORY.rst')
install_requires = ['configobj>=5.0.6', 'numpy>=1.17', 'pandas>=1.0', 'matplotlib>=3.1', 'joblib>=0.14']
tests_require = ['pytest', 'pytest-cov', 'mock']


setup(
    name='robquant',
    version=about['__version__'],
    description='Robustness and uncertainty quantification for Naive Bayes classifiers.',
    long_description=long_description,
    author=about['__author__'],
    author_email=about['__email__'],
    packages=find_packages('src'),
    package_dir={'': 'src'},
    package_data={'robquant': ['data/*.*']},
    include_package_data=True,
    tests_require=tests_require,
    install_requires=install_requires,
    extras_require={'test': tests_require, 'docs': ['sphinx']},
    cmdclass={'test': PyTest},
    license='BSD',
    zip_safe=False,
    keywords='naive bayes robustness uncertainty credal',
    entry_points={
        'console_scripts': [
            'robquant = robquant.launcher:main_func',
        ],
    },
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: BSD License',
        'Natural Language :: English',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Artificial Intelligence',
    ],
)
