"""Panoramic point-track toolkit."""

from ._core import (
    Intrinsics,
    PanotrackError,
    angular_distance,
    curate_clip,
    direction_to_equirect,
    direction_to_pixel,
    dynamics_check,
    equirect_to_direction,
    euler_to_rotation,
    evaluate,
    generate_trajectory,
    pixel_to_direction,
    poster_check,
    procrustes_so3,
    render_perspective,
    run_cli,
    seam_check,
    write_synth,
)

__all__ = [
    "Intrinsics",
    "PanotrackError",
    "angular_distance",
    "curate_clip",
    "direction_to_equirect",
    "direction_to_pixel",
    "dynamics_check",
    "equirect_to_direction",
    "euler_to_rotation",
    "evaluate",
    "generate_trajectory",
    "pixel_to_direction",
    "poster_check",
    "procrustes_so3",
    "render_perspective",
    "run_cli",
    "seam_check",
    "write_synth",
]
