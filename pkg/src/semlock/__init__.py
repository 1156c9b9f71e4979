"""semlock: semantic graphical password engine and strength analytics."""

from .model import (
    GridSpec,
    IconId,
    Move,
    SemanticPassword,
    Side,
    canonicalize,
    default_grid,
    default_icon_set,
    enumerate_space,
    enumerate_space_for,
    move_alphabet,
    parse_canonical,
    theoretical_space,
)
# engine.replay is not re-exported here so that the semlock.replay
# module stays importable as an attribute of the package
from .engine import (
    DEFAULT_SNAP_RADIUS,
    DragEvent,
    PlacementState,
    SnapCandidate,
    apply_moves,
)
from .credentials import CredentialRecord, CredentialStore, VerifyResult
from .corpus import (
    AttemptEvent,
    PairObservation,
    PasswordRecord,
    PatternRecord,
    load_corpus,
    synthesize_corpus,
    synthesize_pairs,
    synthesize_patterns,
)
from .icons import CooccurrenceMatrix, UniformityReport, chi_square_uniformity, count_pairs, select_least_related
from .markov import MarkovModel, rank_space, sequence_probability, train_markov
from .guesswork import (
    GuessworkReport,
    RankedDistribution,
    g_alpha,
    g_tilde_alpha,
    guessing_curve,
    guesswork_report,
    lambda_beta,
    mu_alpha,
)
from .analytics import Heatmap, endpoint_heatmap, usability_metrics

__version__ = "0.1.0"
