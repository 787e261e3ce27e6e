#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""setup.py file for sistem wide installation with setuptools."""

from setuptools import setup


setup(
    name='StefanExact',
    version='0.1.0',
    packages=['StefanExact', 'StefanExact.modules'],
    package_data={'StefanExact': ['config.txt']},
    python_requires='>=3.10',
    install_requires=[
        'numpy',
        'scipy',
        'pandas',
        'rich',
        'numba',
    ],
    extras_require={
        'test': ['pytest', 'mpmath'],
    },
    entry_points={
        'console_scripts': [
            'stefan-exact = StefanExact.__main__:main',
        ]
    })
