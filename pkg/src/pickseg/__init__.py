"""pickseg: segmentation of fruit-picking motion primitives.

Pipeline: raw SE(3) recordings -> frame-relative poses -> kernel-smoothed
uniform grid -> generalized velocities -> rule-based (or LLM-driven)
classification and segmentation into the five primitives
(pull, slide, swing, tilt, twist) -> evaluation against ground truth.
"""

from .errors import PickSegError
from .kinematics import (PoseSample, PoseSeries, enforce_sign_continuity,
                         express_in_frame, jq_matrix, quat_rate_to_omega, skew)
from .resample import (KernelConfig, VelocityResampler, VelocitySeries,
                       central_diff, differentiate, nw_estimate,
                       pose_to_velocity, resample_pose, sup_normalize)
from .segmenter import (DetectionConfig, PrimitiveLabel, PrimitiveTemplate,
                        RuleSegmenter, Segment, SegmentationResult,
                        classify_segment, default_templates,
                        detect_changepoints, segment_and_classify,
                        segment_features)
from .synthgen import (LabeledRecording, MotionSpec, generate_primitive,
                       generate_sequence, random_composite_spec)
from .evaluation import (EvalReport, SequenceEval, aggregate, boundary_errors,
                         error_summary, evaluate_sequence, match_primitives)

__version__ = "0.1.0"

__all__ = [
    "PickSegError", "PoseSample", "PoseSeries", "enforce_sign_continuity",
    "express_in_frame", "jq_matrix", "quat_rate_to_omega", "skew",
    "KernelConfig", "VelocityResampler", "VelocitySeries", "central_diff",
    "differentiate", "nw_estimate", "pose_to_velocity", "resample_pose",
    "sup_normalize", "DetectionConfig", "PrimitiveLabel", "PrimitiveTemplate",
    "RuleSegmenter", "Segment", "SegmentationResult", "classify_segment",
    "default_templates", "detect_changepoints", "segment_and_classify",
    "segment_features", "LabeledRecording", "MotionSpec",
    "generate_primitive", "generate_sequence", "random_composite_spec",
    "EvalReport", "SequenceEval", "aggregate", "boundary_errors",
    "error_summary", "evaluate_sequence", "match_primitives",
    "__version__",
]
