"""Super-resolution reconstruction of fluorescence fluctuation stacks.

Sliding-window eigenimage analysis with hard or soft signal/noise
splits, plus a synthetic-scene simulator and evaluation metrics.
"""

__version__ = "0.1.0"

from .indicator import (
    IndicatorConfig,
    ThresholdSpec,
    WeightVector,
    auto_soft_bounds,
    indicator_value,
    resolve,
    rule_a,
    rule_b,
    second_singular_values,
    soft_ramp,
    weight_arrays,
    weights,
)
from .psf import (
    PsfModel,
    SteeringVector,
    lateral_sigma,
    peak_integral,
    psf_intensity,
    sample_psf_window,
    sample_steering_vector,
    steering_grid,
)
from .metrics import (
    LinePairGeometry,
    RatioCurve,
    RingPairGeometry,
    contrast,
    intensity_histogram,
    line_pair_ratio,
    ratio_curve,
    resolution,
    ring_pair_ratio,
    upsample_mean_image,
)
from .reconstruct import (
    CardinalityMap,
    Reconstruction,
    ReconstructionConfig,
    ReconstructionEngine,
    SingularValueTable,
    cardinality_map,
    default_window_side,
    display_transform,
    reconstruct,
    singular_value_table,
    to_uint8,
    to_uint16,
)
from .simulate import (
    DetectorSpec,
    Photokinetics,
    RenderInfo,
    Scene,
    load_ground_truth,
    make_scene,
    render_stack,
    save_ground_truth,
    scene_kinds,
    simulate_emission,
    simulate_stack,
)
from .stack_io import (
    ImageStack,
    StackSummary,
    load_stack,
    save_stack,
    stack_summary,
)
from .subspace import (
    BatchDecomposition,
    ProjectionSet,
    SubspaceDecomposition,
    WindowStack,
    decompose,
    decompose_windows,
    extract_window,
    interior_centers,
    project,
)

__all__ = [name for name in dir() if not name.startswith("_")]
