import os
import sys
import subprocess
from setuptools import setup, find_packages

if sys.version_info < (3,7):
    print("You must run setup.py with Python 3.7+ only.")
    exit(1)

ourdir = os.path.dirname(__file__)

def read(fname):
    return open(os.path.join(ourdir, fname)).read()

def get_version():
    return subprocess.check_output([sys.executable, os.path.join("maxop/mcore/version.py")]).decode().strip()

requires_list = ['docopt>=0.6.2', 'PyYAML>=3.1.1', 'voluptuous>=0.11', 'numpy>=1.17']

setup(
    name = "maxop",
    version = get_version(),
    description = 'Exact discrete and numerical fractional maximal operators, with convergence experiments',
    long_description = read('README.md'),
    long_description_content_type = 'text/markdown',
    packages = find_packages(exclude = ['tests']),
    entry_points={
        'console_scripts': [
            'maxop = maxop.exec.maxop:main_entry',
            'continuity = maxop.exec.continuity:main_entry',
        ],
    },
    license = "Apache Software License",
    keywords = "maximal function bounded variation sobolev fractional",

    install_requires = requires_list,

    classifiers = [
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: Apache Software License",
        "Natural Language :: English",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
        ]
    )
