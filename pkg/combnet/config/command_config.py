"""
Command Configuration

Defines the structure of one command-line invocation: which subcommand,
which network, which scheme and rate pair, and where artifacts go.

A CommandConfig is built once by the CLI and passed to every handler.
"""

from dataclasses import asdict, dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Optional, Tuple

from ..regions.systems import Scheme as SystemScheme


DEFAULT_SEED = 7


class Subcommand(str, Enum):
    """Batch commands of the front end."""
    REGION = "region"
    CHECK = "check"
    SYNTH = "synth"
    VERIFY = "verify"
    SIMULATE = "simulate"
    MINCUT = "mincut"
    SUBMOD = "submod"
    COMPARE = "compare"


class Scheme(str, Enum):
    """Coding scheme named on the command line."""
    ZS = "zs"     # zero-structured, rate split with alpha >= 0
    PRE = "pre"   # pre-encoded, alpha_phi may be negative
    BM = "bm"     # block Markov with virtual resources

    @property
    def system(self) -> SystemScheme:
        """Constraint system whose projection is the scheme's region."""
        return {
            Scheme.ZS: SystemScheme.PROP1,
            Scheme.PRE: SystemScheme.THM1,
            Scheme.BM: SystemScheme.THM2,
        }[self]


@dataclass
class CommandConfig:
    """
    Everything a handler needs.

    Rates are exact rationals; seed defaults to DEFAULT_SEED so repeated
    invocations write identical files.
    """
    subcommand: str = Subcommand.REGION.value
    net: Optional[str] = None
    scheme: str = Scheme.PRE.value
    r1: Fraction = Fraction(0)
    r2: Fraction = Fraction(0)
    blocks: int = 4
    seed: int = DEFAULT_SEED
    out: Optional[str] = None

    # Command-specific inputs
    halfplane: Optional[Tuple[int, int, int]] = None
    code: Optional[str] = None
    against: Optional[str] = None
    method: str = "auto"
    receiver: Optional[int] = None
    profile: Optional[str] = None
    flush: str = "auto"
    verbose: bool = False

    @property
    def rates(self) -> Tuple[Fraction, Fraction]:
        return self.r1, self.r2

    def to_dict(self) -> Dict:
        """Plain dictionary; rationals become 'p/q' strings."""
        data = asdict(self)
        data["r1"] = str(self.r1)
        data["r2"] = str(self.r2)
        if self.halfplane is not None:
            data["halfplane"] = list(self.halfplane)
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "CommandConfig":
        """Create from dictionary, ignoring unknown keys."""
        values = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        for key in ("r1", "r2"):
            if key in values:
                values[key] = Fraction(str(values[key]))
        if values.get("halfplane") is not None:
            values["halfplane"] = tuple(int(v) for v in values["halfplane"])
        return cls(**values)


# Default configuration template
DEFAULT_CONFIG = {
    "subcommand": "region",
    "net": None,
    "scheme": "pre",
    "r1": "0",
    "r2": "0",
    "blocks": 4,
    "seed": DEFAULT_SEED,
    "out": None,
    "halfplane": None,
    "code": None,
    "against": None,
    "method": "auto",
    "receiver": None,
    "profile": None,
    "flush": "auto",
    "verbose": False,
}


def get_default_config(subcommand: str = "region", net: Optional[str] = None) -> Dict:
    """
    Get a fresh default configuration dictionary.

    Args:
        subcommand: Command name
        net: Path of the network document

    Returns:
        Dictionary with default values
    """
    config = DEFAULT_CONFIG.copy()
    config["subcommand"] = subcommand
    config["net"] = net
    return config
