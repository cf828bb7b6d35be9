"""Outage-aware control of ground vehicles over a drone relay link."""

from ._lawnctl import (
    ChannelParams,
    default_config,
    fbl_rate,
    link_budget,
    outage_probability,
    project_capped_simplex,
    run,
    snr_threshold,
    sweep,
)

__all__ = [
    "ChannelParams",
    "default_config",
    "fbl_rate",
    "link_budget",
    "outage_probability",
    "project_capped_simplex",
    "run",
    "snr_threshold",
    "sweep",
]
