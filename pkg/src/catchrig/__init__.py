"""catchrig: simulator and controllers for an actuated cable-spring
support and recovery rig for planar legged robots.

The rig shadows a robot from below with a slack cable, applies
controlled vertical forces through a unidirectional series spring, and
on failure detection catches and lifts the robot clear of the ground.
"""

from .backend import name as backend_name
from .control import (ForceGains, RecoveryGains, ShadowGains, force_cmd,
                      recovery_cmd, shadowing_cmd)
from .filters import (LowPassState, SetPointFilterState, lowpass_step,
                      spf_init, spf_step, velocity_estimate)
from .metrics import MetricsReport, ModeAbsent, compute_metrics, rise_time_10_90
from .model import (ModelParams, NonFiniteState, PlantState, SpringMode,
                    accel_bound, damping_bound, modified_gravity, robot_accel,
                    spring_force, spring_force_components, step_physics)
from .scenario import (ParseError, Scenario, ValidationError, load_scenario,
                       load_scenario_file)
from .sensors import SensorConfig, SensorReadings, SensorRig, quantize_floor
from .sim import RunResult, run
from .supervise import (EmptyPointList, FailureCause, FailureConfig, Mode,
                        SupervisorActions, SupervisorState, UnknownJoint,
                        check_ground_failure, check_joint_fault,
                        monitor_constraints, supervisor_step)
from .telemetry import IoError, TelemetryRecord, read_csv, write_csv
from .waveforms import StepSchedule, Waveform

__version__ = "0.1.0"
