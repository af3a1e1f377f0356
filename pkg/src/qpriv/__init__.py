"""Contraction bounds, private mechanisms, and hypothesis testing for quantum channels."""

from .applications import Ensemble
from .contraction import ContractionReport
from .divergences import ConvexFunction
from .errors import QPrivError
from .hypothesis import HypothesisInstance, LowPrivacyReport, SampleComplexityResult
from .privacy import CertificationResult, PrivacyParams, SearchBudget
from .quantum_core import DensityMatrix, KrausChannel, Povm, PurePairSpectrum, PureState

__all__ = [
    "CertificationResult",
    "ContractionReport",
    "ConvexFunction",
    "DensityMatrix",
    "Ensemble",
    "HypothesisInstance",
    "KrausChannel",
    "LowPrivacyReport",
    "Povm",
    "PrivacyParams",
    "PurePairSpectrum",
    "PureState",
    "QPrivError",
    "SampleComplexityResult",
    "SearchBudget",
]

__version__ = "0.1.0"
