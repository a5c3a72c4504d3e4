"""Vision-to-vibrotactile guidance: encoding, simulation, analysis, serving."""

from .agents import DEFAULT_AGENTS, AgentKind, AgentModel
from .analysis import (
    OutlierRule,
    PathMetrics,
    SummaryStats,
    path_metrics,
    positioning_error,
    summarize,
)
from .encoding import (
    DisplacementUCS,
    EncoderConfig,
    GuidanceStage,
    MotorCommand,
    VoiceCue,
    VoiceWord,
    encode_vibro,
    encode_vibro_staged,
    encode_voice,
    pwm_schedule,
)
from .geometry import (
    CameraIntrinsics,
    PointCCS,
    PointUCS,
    Quaternion,
    RotationMatrix,
    camera_to_user,
    deproject,
    project,
    quat_to_rotation,
)
from .perception import (
    Detection,
    ObservationNoise,
    Scene,
    generate_tabletop_scene,
    localize,
    observe,
)
from .trials import (
    FeedbackMode,
    TrialConfig,
    TrialOutcome,
    TrialTrace,
    run_session,
    run_trial,
)

__version__ = "0.1.0"
