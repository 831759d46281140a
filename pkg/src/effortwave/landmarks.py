"""Landmark naming shared by the trace schema and the body model.

Names follow the 33-point MediaPipe/BlazePose pose topology, index order
matching the estimator's output. Traces are not required to carry all 33
points; they must carry at least the set the active body model consumes.
"""

POSE_LANDMARKS = (
    "nose",
    "left_eye_inner", "left_eye", "left_eye_outer",
    "right_eye_inner", "right_eye", "right_eye_outer",
    "left_ear", "right_ear",
    "mouth_left", "mouth_right",
    "left_shoulder", "right_shoulder",
    "left_elbow", "right_elbow",
    "left_wrist", "right_wrist",
    "left_pinky", "right_pinky",
    "left_index", "right_index",
    "left_thumb", "right_thumb",
    "left_hip", "right_hip",
    "left_knee", "right_knee",
    "left_ankle", "right_ankle",
    "left_heel", "right_heel",
    "left_foot_index", "right_foot_index",
)

# Landmarks the default body model resolves segment endpoints from.
MODEL_REQUIRED_LANDMARKS = (
    "left_ear", "right_ear",
    "left_shoulder", "right_shoulder",
    "left_elbow", "right_elbow",
    "left_wrist", "right_wrist",
    "left_hip", "right_hip",
    "left_knee", "right_knee",
    "left_ankle", "right_ankle",
    "left_heel", "right_heel",
    "left_foot_index", "right_foot_index",
)

# Hand tips improve the hand segments when present; traces may omit them.
MODEL_OPTIONAL_LANDMARKS = ("left_index", "right_index")
