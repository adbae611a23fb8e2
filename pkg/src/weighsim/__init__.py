"""weighsim: load-cell weigh-station simulator.

From strain-gauge bridge physics through 24-bit ADC frames and two-point
calibration to centre-of-gravity assessment, alert classification and
weighbridge-style compliance checks, plus a forward statics harness that
provides ground truth for end-to-end tests.
"""

from .errors import WeighSimError
from .sensor import (
    AdcConfig,
    AdcFrame,
    BridgeReading,
    FOUR_CELL_120KG,
    LoadCellSpec,
    TWO_CELL_5KG,
    add_noise,
    bridge_output,
    dequantize,
    quantize,
)
from .codec import BitTrace, decode_frame, encode_frame
from .calibration import CalibrationState, MassReading, calibrate, code_to_mass, tare
from .cog import (
    AlertPolicy,
    DeckGeometry,
    FourCellReading,
    LoadAssessment,
    POLICIES,
    TwoCellAssessment,
    TwoCellReading,
    assess_four_cell,
    assess_two_cell,
    classify,
    lateral_offset_two_cell,
    policy,
    render_lcd,
    total_weight_two_cell,
)
from .compliance import (
    AXLE_CONFIGURATIONS,
    AxleConfiguration,
    ComplianceResult,
    KENYA_FIRST_TIME,
    KENYA_REVERIFICATION,
    NZ_BAND,
    ToleranceRule,
    US_HANDBOOK44,
    builtin_rule,
    check_compliance,
    max_permissible_error,
    simulate_weigh_stream,
    static_weigh,
    wim_weigh,
    within_gvw_limit,
)
from .scenario import (
    Placement,
    Scenario,
    centroid,
    corner_loads,
    ideal_calibration,
    run_end_to_end,
    total_mass,
)
from .station import (
    FrameIngestor,
    RecordStore,
    SensorFrameRecord,
    WeighRecord,
    format_frame_line,
    parse_frame_line,
    run_session,
)

__version__ = "0.1.0"
