"""minimal package setup"""
import os
from setuptools import setup, find_packages

# Utility function to read the README file.
def read(fname):
    return open(os.path.join(os.path.dirname(__file__), fname)).read()

setup(
    name="antiptsv",
    version="1.0",
    author="antiptsv developers",
    license="MIT",
    description="Simulate dissipatively coupled spin waves: anti-PT "
                "supermodes, noise spectra, Gaussian discord and EIT gain",
    long_description=read('readme.rst'),
    packages=find_packages(),
    include_package_data=True,
    package_data={"antiptsv": ["tests/data/*.json", "tests/data/*.csv"]},
    classifiers=["Programming Language :: Python :: 3"],
    zip_safe=False,
    install_requires=['numpy>=1.20.0',
                      'scipy>=1.6.0',
                      'pandas>=1.5.0',
                      'scikit-learn>=0.24.0',
                      'joblib>=1.0.0'],
    extras_require={'develop': ['ddt>=1.4.0',
                                'prospector>=0.12.7',
                                'pytest>=6.0.0',
                                'pytest-cov',
                                'Sphinx>=1.5.1',
                                'sphinx-rtd-theme>=0.1.9']},
    entry_points={'console_scripts': ['antiptsv = antiptsv.cli:main']}
)
