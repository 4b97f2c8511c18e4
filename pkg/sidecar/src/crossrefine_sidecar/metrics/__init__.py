from .bartscore import SeqLikelihoodScorer
from .bertscore import GreedyMatchScorer
from .bleurt import PairRegressionScorer
from .moverscore import WordMoverScorer, earth_mover_distance
from .tigerscore import ErrorAnalysisScorer, PER_ERROR_BOUNDS

__all__ = [
    "SeqLikelihoodScorer",
    "GreedyMatchScorer",
    "PairRegressionScorer",
    "WordMoverScorer",
    "earth_mover_distance",
    "ErrorAnalysisScorer",
    "PER_ERROR_BOUNDS",
]
