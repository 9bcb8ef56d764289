from pathlib import Path

from setuptools import setup

setup(
    name='memoryless',
    version='0.1.0',
    packages=['memoryless'],
    license='MIT License',
    description='Intermediate dynamical maps of non-Markovian qubit evolutions and their complete positivity',
    install_requires=[line.strip() for line in Path("requirements.txt").read_text(encoding='utf8').splitlines()
                      if line.strip()],
    entry_points={'console_scripts': ['memoryless=memoryless.cli:main']}
)
