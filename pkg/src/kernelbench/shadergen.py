"""GLSL-ES 1.00 source generation for convolution chains, plus a CPU reference.

A chain compiles to one fragment shader per pass and a shared pass-through
vertex shader. Kernel coefficients travel as the u_kernel[9] uniform, never
as source literals, so one compiled shader serves any 3x3 kernel. The CPU
reference executor implements the same sampling semantics (clamp-to-edge,
row-major nine-tap correlation, guarded normalization) for verification
without a GPU.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import EmptyChain, UnsupportedKernel
from .image import ImageBuffer, atomic_write_bytes
from .kernels import BorderPolicy, Kernel, correlate


@dataclass(frozen=True)
class ChainPass:
    """One convolution pass: a 3x3 kernel, a normalize flag, a repeat count.

    repeat models applying the same operator several times per pixel; the
    generated shader unrolls that many stencil blocks in a single pass.
    """

    kernel: Kernel
    normalize: bool = False
    repeat: int = 1

    def __post_init__(self) -> None:
        if self.kernel.side != 3:
            raise UnsupportedKernel(
                f"the shader target fixes u_kernel[9]; kernel side must be 3, got {self.kernel.side}"
            )
        if self.repeat < 1:
            raise ValueError(f"repeat must be >= 1, got {self.repeat}")


@dataclass(frozen=True)
class ChainSpec:
    """Ordered, non-empty list of passes."""

    passes: tuple[ChainPass, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "passes", tuple(self.passes))
        if not self.passes:
            raise EmptyChain("a chain needs at least one pass")


@dataclass(frozen=True)
class UniformBinding:
    """Declared name, GLSL type, and array length (0 for scalars) of a uniform."""

    name: str
    glsl_type: str
    array_length: int = 0


_PASS_UNIFORMS = (
    UniformBinding("u_image", "sampler2D"),
    UniformBinding("u_textureSize", "vec2"),
    UniformBinding("u_kernel", "float", 9),
)


@dataclass(frozen=True)
class GeneratedProgram:
    """Vertex source, one fragment source per pass, and uniform metadata."""

    vertex_source: str
    fragment_sources: tuple[str, ...]
    uniforms: tuple[tuple[UniformBinding, ...], ...]

    def __post_init__(self) -> None:
        if len(self.fragment_sources) != len(self.uniforms):
            raise ValueError("one uniform set is required per fragment source")


_VERTEX_SOURCE = """\
attribute vec2 a_position;
attribute vec2 a_texCoord;

varying vec2 v_texCoord;

void main() {
    gl_Position = vec4(a_position, 0.0, 1.0);
    v_texCoord = a_texCoord;
}
"""


def _format_float(value: float) -> str:
    """Shortest decimal that round-trips, always with an explicit point."""
    return np.format_float_positional(value, unique=True, trim="0")


def generate_vertex_shader() -> str:
    """Pass-through vertex shader shared by every pass; byte-stable."""
    return _VERTEX_SOURCE


def _stencil_block(normalize: bool) -> str:
    """One unrolled nine-tap application writing the running color."""
    lines = ["    colorSum ="]
    for tap in range(9):
        dy = tap // 3 - 1
        dx = tap % 3 - 1
        offset = f"vec2({_format_float(float(dx))}, {_format_float(float(dy))})"
        end = " +" if tap < 8 else ";"
        lines.append(
            f"        texture2D(u_image, v_texCoord + onePixel * {offset}) * u_kernel[{tap}]{end}"
        )
    if normalize:
        lines.append("    color = vec4((colorSum / kernelWeight).rgb, 1.0);")
    else:
        lines.append("    color = vec4(colorSum.rgb, 1.0);")
    return "\n".join(lines) + "\n"


def generate_fragment_shader(chain_pass: ChainPass) -> str:
    """Fragment shader for one pass; deterministic bytes for equal passes.

    The source declares u_image, u_textureSize, and u_kernel[9], computes
    onePixel from the texture size, and unrolls `repeat` identical stencil
    blocks. With normalize set it divides by kernelWeight, the uniform sum
    guarded to 1.0 when it is not positive.
    """
    if chain_pass.kernel.side != 3:
        raise UnsupportedKernel(
            f"kernel side must be 3 for the GLSL target, got {chain_pass.kernel.side}"
        )
    head = [
        "precision mediump float;",
        "",
        "uniform sampler2D u_image;",
        "uniform vec2 u_textureSize;",
        "uniform float u_kernel[9];",
        "",
        "varying vec2 v_texCoord;",
        "",
        "void main() {",
        "    vec2 onePixel = vec2(1.0, 1.0) / u_textureSize;",
    ]
    if chain_pass.normalize:
        head += [
            "    float kernelWeight = u_kernel[0] + u_kernel[1] + u_kernel[2]",
            "        + u_kernel[3] + u_kernel[4] + u_kernel[5]",
            "        + u_kernel[6] + u_kernel[7] + u_kernel[8];",
            "    if (kernelWeight <= 0.0) {",
            "        kernelWeight = 1.0;",
            "    }",
        ]
    head += [
        "    vec4 color = vec4(0.0, 0.0, 0.0, 1.0);",
        "    vec4 colorSum;",
    ]
    blocks = "".join(_stencil_block(chain_pass.normalize) for _ in range(chain_pass.repeat))
    tail = [
        "    gl_FragColor = vec4(color.rgb, 1.0);",
        "}",
    ]
    return "\n".join(head) + "\n" + blocks + "\n".join(tail) + "\n"


def generate_program(chain: ChainSpec) -> GeneratedProgram:
    """Compile a chain: shared vertex source, one fragment per pass."""
    if not chain.passes:
        raise EmptyChain("a chain needs at least one pass")
    fragments = tuple(generate_fragment_shader(p) for p in chain.passes)
    uniforms = tuple(_PASS_UNIFORMS for _ in chain.passes)
    return GeneratedProgram(_VERTEX_SOURCE, fragments, uniforms)


def execute_chain_reference(image: ImageBuffer, chain: ChainSpec) -> ImageBuffer:
    """Run a chain on the CPU with the generated shaders' sampling semantics.

    Each pass correlates under clamp-to-edge with its normalize flag, and
    repeat r applies the pass r times sequentially, each application reading
    the previous result. A single non-repeated pass is bit-identical to
    correlate() by construction.
    """
    out = image
    for chain_pass in chain.passes:
        for _ in range(chain_pass.repeat):
            out = correlate(
                out, chain_pass.kernel, BorderPolicy.CLAMP_TO_EDGE, chain_pass.normalize
            )
    return out


def write_program(program: GeneratedProgram, chain: ChainSpec, stem) -> list:
    """Write <stem>.vert, fragment file(s), and a <stem>.json sidecar.

    Single-pass chains write <stem>.frag; multi-pass chains write
    <stem>.<index>.frag. The sidecar lists, per pass, the fragment file, the
    uniform declarations, and the u_kernel values to bind along with the
    normalize and repeat settings. Every file is written atomically.

    Returns the list of paths written.
    """
    stem = os.fspath(stem)
    paths = []
    vertex_path = stem + ".vert"
    atomic_write_bytes(vertex_path, program.vertex_source.encode("ascii"))
    paths.append(vertex_path)
    multi = len(program.fragment_sources) > 1
    passes_meta = []
    for index, source in enumerate(program.fragment_sources):
        fragment_path = f"{stem}.{index}.frag" if multi else stem + ".frag"
        atomic_write_bytes(fragment_path, source.encode("ascii"))
        paths.append(fragment_path)
        chain_pass = chain.passes[index]
        passes_meta.append(
            {
                "fragment": os.path.basename(fragment_path),
                "uniforms": [
                    {
                        "name": binding.name,
                        "type": binding.glsl_type,
                        "array_length": binding.array_length,
                    }
                    for binding in program.uniforms[index]
                ],
                "u_kernel_values": [
                    float(v) for v in chain_pass.kernel.coefficients.ravel()
                ],
                "normalize": chain_pass.normalize,
                "repeat": chain_pass.repeat,
            }
        )
    meta = {"vertex": os.path.basename(vertex_path), "passes": passes_meta}
    json_path = stem + ".json"
    atomic_write_bytes(json_path, (json.dumps(meta, indent=2) + "\n").encode("ascii"))
    paths.append(json_path)
    return paths
