"""Exception types shared across the package."""


class HawkesLobError(Exception):
    """Base class for all package-specific failures."""


class StationarityError(HawkesLobError):
    """Branching matrix has spectral radius >= 1; no stationary regime exists."""


class ErgodicityError(HawkesLobError):
    """Transition matrix has no unique positive stationary distribution."""


class DegenerateChainError(HawkesLobError):
    """Jump-size chain carries no usable randomness (e.g. p + p' = 2, one state)."""


class DegenerateModelError(HawkesLobError):
    """Model constants make the requested quantity undefined (e.g. zero volatility)."""


class NoSolutionError(HawkesLobError):
    """Observed price violates the no-arbitrage bounds; no implied volatility exists."""


class StrikeAdjustmentError(HawkesLobError):
    """Moment-matched basket strike K* is non-positive; the lognormal proxy breaks down."""


class CalibrationError(HawkesLobError):
    """Maximum-likelihood fit failed to converge or produced an unstable kernel."""


class NumericalError(HawkesLobError):
    """A linear solve or iteration failed beyond recoverable tolerance."""


class DataError(HawkesLobError):
    """Input event data violates the format contract."""
