from os.path import abspath, dirname

from setuptools import setup, find_packages

pwd = dirname(abspath(__file__))
with open(pwd + '/torclosed/VERSION') as f:
    version = f.read().strip()

setup(
    name='torclosed',
    version=version,
    description='Build and certify (P, phi)-Tamari lattices of torsion-closed sets',
    packages=find_packages(exclude=['tests', 'tests.*']),
    entry_points={
        "console_scripts": [
            "torclosed = torclosed:main"
        ],
    },
    package_data={'': ['VERSION']},
    install_requires=[
        'networkx >= 2.5',
        'numpy >= 1.19',
        'pydot >= 1.4',
    ],
    extras_require={
        'tests': ['pytest >= 6.0'],
    },
)
