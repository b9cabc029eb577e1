"""Robustness quantification for Naive Bayes classifiers"""
__author__ = 'robquant developers'
__email__ = 'robquant@users.noreply.github.com'
__version__ = '0.1.0'
