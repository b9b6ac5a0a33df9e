"""Latent vector recovery for dense GAN generators."""

from ._glvr import (
    Criterion,
    GlvrError,
    Network,
    great_circle,
    init_generator,
    load_checkpoint,
    per_step_prob,
    read_tensor,
    reconstruction_error,
    recover,
    resample_prob,
    run_paired_trials,
    sample_prior,
    slerp,
    unit_vector,
    write_tensor,
)

__all__ = [
    "Criterion",
    "GlvrError",
    "Network",
    "great_circle",
    "init_generator",
    "load_checkpoint",
    "per_step_prob",
    "read_tensor",
    "reconstruction_error",
    "recover",
    "resample_prob",
    "run_paired_trials",
    "sample_prior",
    "slerp",
    "unit_vector",
    "write_tensor",
]
