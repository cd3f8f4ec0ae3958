#!/usr/bin/env python3
"""
Python setuptools script for ``trotex`` application.
"""
from setuptools import setup
from setuptools import find_packages
from trotex.version import __version__

setup(
    name='trotex',
    version=__version__,
    description='Trotter error extrapolation experiments',
    long_description=(
        "Reduce the Trotter error of product formula simulations by "
        "Richardson extrapolation and Chebyshev interpolation in the inverse "
        "number of steps, and check the error bounds on dense state vector "
        "simulations."
    ),
    author='Greenhost BV',
    author_email='info@greenhost.nl',
    packages=find_packages(exclude=('dev', 'trotex.tests', 'trotex.tests.*')),
    python_requires='>=3.6, <4',
    install_requires=[
        'configargparse>=0.14.0',
        'numpy>=1.17.0',
        'scipy>=1.3.0',
    ],
    extras_require={
        'docs': [
            'Sphinx>=2.2.0',
            'sphinx-argparse>=0.2.5',
            'sphinx_rtd_theme>=0.4.3',
        ],
        'tests': [
            'pytest>=5.1.2',
            'hypothesis>=4.36.0',
        ],
    },
    license='Apache Version 2.0',
    classifiers=[
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: Apache Software License',
        'Operating System :: POSIX :: Linux',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.6',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Topic :: Scientific/Engineering :: Physics',
    ],
    keywords='trotter suzuki richardson extrapolation chebyshev quantum',
    entry_points={
        'console_scripts': [
            'trotex = trotex.__main__:init'
        ]
    },
)
