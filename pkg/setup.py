from setuptools import setup

from pygqe.version import __version__

setup(
    name = "pygqe",
    version = __version__,
    author = "Cho Phan",
    description = "Existence, certification and cone scans for admissible generalized quasi-Einstein metrics",
    packages = [
        "pygqe",
        "pygqe.gqe"
    ],
    python_requires = ">=3.10",
    install_requires = [
        "numpy",
        "scipy",
        "joblib",
        "sympy"
    ],
    extras_require = {
        "test": [
            "pytest"
        ]
    },
    entry_points = {
        "console_scripts": [
            "pygqe = pygqe.cli:main"
        ]
    }
)
