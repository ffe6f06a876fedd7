"""Analytic model, parameter tuner and simulator for control information
dissemination with full-dump and differential updates."""

from ._ctrldiss import (
    AnalyticReport,
    ProtocolParams,
    ScenarioParams,
    SimulationReport,
    StationaryDistribution,
    Strategy,
    TuneMode,
    TuningResult,
    addition_dist,
    analytic_report,
    asymptotic_report,
    deletion_dist,
    message_loss_prob,
    n_max,
    simulate,
    stationary_distribution,
    tune,
)

__all__ = [
    "AnalyticReport",
    "ProtocolParams",
    "ScenarioParams",
    "SimulationReport",
    "StationaryDistribution",
    "Strategy",
    "TuneMode",
    "TuningResult",
    "addition_dist",
    "analytic_report",
    "asymptotic_report",
    "deletion_dist",
    "message_loss_prob",
    "n_max",
    "simulate",
    "stationary_distribution",
    "tune",
]
