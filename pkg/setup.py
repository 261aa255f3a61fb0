from setuptools import setup, find_packages

setup(
    name="fluxlim",
    version="1.0.0",
    description="Finite-volume and JKO laboratory for flux-limited drift-diffusion equations",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "numpy>=1.26.0",
        "scipy>=1.11.0",
        "pyyaml>=6.0.0",
        "jinja2>=3.1.2",
        "click>=8.1.7",
        "rich>=13.7.0",
    ],
    extras_require={
        "test": [
            "pytest>=8.0.0",
            "hypothesis>=6.100.0",
        ],
        "plot": [
            "matplotlib>=3.8.0",
        ],
    },
    python_requires=">=3.9",
    entry_points={
        "console_scripts": [
            "fluxlim=fluxlim.cli:main",
        ],
    },
)
