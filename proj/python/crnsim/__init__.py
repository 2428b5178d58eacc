"""Discrete-event simulator for two-class preemptive-priority queueing networks.

The heavy lifting lives in the compiled extension ``crnsim._core``; this
package re-exports its public surface.
"""

from ._core import (
    ArrivalSpec,
    Discipline,
    GEParams,
    JobClass,
    MM1Result,
    NetworkConfig,
    OutputRow,
    PrPriorityResult,
    RngStream,
    RunStats,
    SchemeConfig,
    StationKind,
    StationParams,
    aggregate,
    builtin_scheme,
    emit,
    erlang_c_wq,
    exp_sample,
    format_number,
    ge_sample,
    ge_tau,
    load_config,
    mm1,
    mm1_preemptive_resume,
    mm1_preemptive_resume_ctmc,
    mm1n_loss,
    mm1n_loss_ctmc,
    mmc_wq_ctmc,
    run_replication,
    run_scheme,
    standard_stations,
    student_t_975,
    to_csv,
    to_plotdata,
)

__all__ = [
    "ArrivalSpec",
    "Discipline",
    "GEParams",
    "JobClass",
    "MM1Result",
    "NetworkConfig",
    "OutputRow",
    "PrPriorityResult",
    "RngStream",
    "RunStats",
    "SchemeConfig",
    "StationKind",
    "StationParams",
    "aggregate",
    "builtin_scheme",
    "emit",
    "erlang_c_wq",
    "exp_sample",
    "format_number",
    "ge_sample",
    "ge_tau",
    "load_config",
    "mm1",
    "mm1_preemptive_resume",
    "mm1_preemptive_resume_ctmc",
    "mm1n_loss",
    "mm1n_loss_ctmc",
    "mmc_wq_ctmc",
    "run_replication",
    "run_scheme",
    "standard_stations",
    "student_t_975",
    "to_csv",
    "to_plotdata",
]
