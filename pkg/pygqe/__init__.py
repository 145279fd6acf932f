from pygqe.author import __author__
from pygqe.version import __version__
