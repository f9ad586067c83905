import spincraft
import os
import setuptools


here = os.path.abspath(os.path.dirname(__file__))

# Get the long description from the README file.
with open(os.path.join(here, "README.md"), encoding="utf-8") as md:
    long_description = md.read()


setuptools.setup(
    name="spincraft",
    version=spincraft.__version__,

    long_description=long_description,
    long_description_content_type="text/markdown",
    description="SpinCraft simulates singlet-order spin-lock sequences",

    author="Yasha Bubnov",
    author_email="girokompass@gmail.com",

    classifiers=[
      "Intended Audience :: Science/Research",
      "License :: OSI Approved :: Apache Software License",
      "Topic :: Scientific/Engineering :: Physics",
    ],

    packages=setuptools.find_packages(exclude=["tests"]),
    python_requires=">=3.7",
    install_requires=[
        "flagparse>=0.0.2",
        "humanize>=0.5.1",
        "numpy>=1.17.0",
        "pyyaml>=5.1.1",
        "scipy>=1.6.0",
        "semver>=2.8.1,<3",
    ],

    entry_points={
        "console_scripts": ["spincraft = spincraft.shell.main:main"],
    },
)
