"""Average symbol error rate of QAM over IRS-assisted links."""

from .aser import AserCurve, METHODS, aser, aser_bpsk, aser_from_terms, aser_rqam, aser_sqam, aser_xqam
from .channel import IrsLink, link_params, mgf_approx
from .errors import DomainError, NumericError
from .modem import ModulationScheme, QzTerm, QzTermSet, constellation, decompose
from .montecarlo import SimulationConfig, SimulationReport, simulate_ser, validate_clt

__all__ = [
    "AserCurve", "METHODS", "aser", "aser_bpsk", "aser_from_terms", "aser_rqam",
    "aser_sqam", "aser_xqam", "IrsLink", "link_params", "mgf_approx", "DomainError",
    "NumericError", "ModulationScheme", "QzTerm", "QzTermSet", "constellation",
    "decompose", "SimulationConfig", "SimulationReport", "simulate_ser", "validate_clt",
]
