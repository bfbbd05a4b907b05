"""Hardware-independent gesture generation for conversational humanoid robots.

Motion capture is turned into Labanotation scores, scores are clustered into a
concept-indexed gesture library, one gesture is chosen per utterance, and the
chosen score is compiled into joint trajectories for a specific robot.
"""

from .codebook import HOLD, Azimuth, Codebook, Direction, Level, default_codebook, geodesic_distance, parse_symbol, quantize_direction
from .compiler import JointTrajectory, RobotProfile, TimingParams, compile_score, load_profile, pose_to_angles, validate_trajectory
from .engine import EngineConfig, SelectionResult, pick_variant, select_gesture
from .io import ScoreDocument, load_library, parse_library, parse_score, serialize_score, write_library
from .library import Category, GestureConceptPair, GestureLibrary, add_variation, cluster_scores, distance_matrix
from .motion import KeyframeParams, MotionClip, SkeletonFrame, clip_to_score
from .score import BodyColumn, LabanScore, resample_score, score_distance
from .semantics import EmbeddingTable, RampParams, match_strength, ramp, tokenize, word_similarity, word_to_group

__version__ = "0.1.0"
