"""Exact small-deck analysis of the Thorp shuffle and its time reversal."""

__version__ = "0.1.0"

CONVENTIONS = ("L1-unhalved", "log-natural")

from .core import (  # noqa: E402
    BitOracle,
    DeckParams,
    KeyedOracle,
    Permutation,
    SeededOracle,
    TabularOracle,
    join_position,
    rank,
    round_image,
    split_position,
    unrank,
)
from .errors import CapacityError, DomainError, OracleDomainError, ThorpError  # noqa: E402
from .shuffle import (  # noqa: E402
    Trajectory,
    forward_round,
    reverse_round,
    simulate,
    single_card_kernel,
)
