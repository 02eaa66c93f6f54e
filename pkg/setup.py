from setuptools import setup, find_packages
from codecs import open

__version__ = '0.1.0'

# Get the long description from the README file
with open('README.rst', encoding='utf-8') as f:
    long_description = f.read()

# Get the dependencies and installs
with open('requirements.txt', encoding='utf-8') as f:
    all_reqs = f.read().split('\n')

install_requires = [x.strip() for x in all_reqs if x.strip()]

setup(
    name='reachsched',
    version=__version__,
    description='Communication schedules for reach-avoid control over networks: reference planning, symbolic '
                'error abstraction, offline and self-triggered scheduling, Monte-Carlo simulation.',
    long_description=long_description,
    packages=find_packages(exclude=['tests', 'docs', 'examples']),
    package_data={'reachsched': ['scenarios/*.json']},
    license='Apache License 2.0',
    install_requires=install_requires,
    entry_points={'console_scripts': ['reachsched=reachsched.run.run_reachsched:main']},
    classifiers=[
        "Programming Language :: Python :: 3.6",
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: OS Independent"
    ]
)
