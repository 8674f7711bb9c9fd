"""Kernel-convolution image engine, GLSL-ES codegen, and benchmark harness."""

from .bench import (
    DEFAULT_FRAMES,
    DEFAULT_VSYNC_HZ,
    OPERATOR_COUNTS,
    RESOLUTIONS,
    SMOOTHING_KERNEL,
    WARMUP_FRAMES,
    Scenario,
    ScenarioReport,
    ScenarioRow,
    scenario_operators,
    scenario_resolutions,
)
from .detectors import (
    FREI_CHEN_EPSILON,
    FreiChenSubset,
    frei_chen,
    sobel_magnitude,
    sobel_magnitude_rgb,
    threshold,
)
from .errors import (
    EmptyChain,
    EndOfStream,
    FormatError,
    KernelBenchError,
    RangeError,
    SizeError,
    UnsupportedFormat,
    UnsupportedKernel,
)
from .image import (
    ImageBuffer,
    PixelFormat,
    decode_bytes,
    encode_bytes,
    read_pnm,
    to_luminance,
    write_pnm,
)
from .kernels import (
    FREI_CHEN,
    SOBEL_GX,
    SOBEL_GY,
    BorderPolicy,
    Kernel,
    compose,
    correlate,
    parse_kernel,
)
from .pipeline import (
    DetectorKind,
    Engine,
    FramePattern,
    FrameSource,
    FrameStats,
    RawStreamSource,
    RunReport,
    SyntheticSource,
    clock_resolution_ms,
    elapsed_ms,
    next_frame,
    now,
    run,
)
from .shadergen import (
    ChainPass,
    ChainSpec,
    GeneratedProgram,
    UniformBinding,
    execute_chain_reference,
    generate_fragment_shader,
    generate_program,
    generate_vertex_shader,
    write_program,
)

__version__ = "0.1.0"

__all__ = [
    "BorderPolicy",
    "ChainPass",
    "ChainSpec",
    "DEFAULT_FRAMES",
    "DEFAULT_VSYNC_HZ",
    "DetectorKind",
    "EmptyChain",
    "EndOfStream",
    "Engine",
    "FormatError",
    "FramePattern",
    "FrameSource",
    "FrameStats",
    "FreiChenSubset",
    "FREI_CHEN",
    "FREI_CHEN_EPSILON",
    "GeneratedProgram",
    "ImageBuffer",
    "Kernel",
    "KernelBenchError",
    "OPERATOR_COUNTS",
    "PixelFormat",
    "RangeError",
    "RawStreamSource",
    "RESOLUTIONS",
    "RunReport",
    "Scenario",
    "ScenarioReport",
    "ScenarioRow",
    "SizeError",
    "SMOOTHING_KERNEL",
    "SOBEL_GX",
    "SOBEL_GY",
    "SyntheticSource",
    "UniformBinding",
    "UnsupportedFormat",
    "UnsupportedKernel",
    "WARMUP_FRAMES",
    "clock_resolution_ms",
    "compose",
    "correlate",
    "decode_bytes",
    "elapsed_ms",
    "encode_bytes",
    "execute_chain_reference",
    "frei_chen",
    "generate_fragment_shader",
    "generate_program",
    "generate_vertex_shader",
    "next_frame",
    "now",
    "parse_kernel",
    "read_pnm",
    "run",
    "scenario_operators",
    "scenario_resolutions",
    "sobel_magnitude",
    "sobel_magnitude_rgb",
    "threshold",
    "to_luminance",
    "write_pnm",
    "write_program",
]
