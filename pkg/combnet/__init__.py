"""
combnet - rate regions, zero-error codes and converse certificates for
two-level broadcast over combination networks.

See combnet.cli for the command-line front end.
"""

__version__ = "0.1.0"
