//! Follow-the-quantized-leader dynamics: schedules, noise, feedback
//! channels, the score update, and whole-trajectory runs.

pub mod feedback;
pub mod learner;
pub mod noise;
pub mod schedule;
pub mod trajectory;

pub use feedback::{
    iwe_estimate, realized_feedback, sample_action, sampling_strategy, vector_feedback, FeedbackChannel, FeedbackMode,
};
pub use learner::{ftql_step, Ftql, LearnerState, StageObservation};
pub use noise::NoiseModel;
pub use schedule::{Schedule, ScheduleValidity};
pub use trajectory::{run_trajectory, InitSpec, LogPlan, StageEntry, TrajectoryRecord};
