"""Slime Trail: rules engine, exact solver, QBF reduction and verifier."""

from ._slimetrail import (
    BudgetExhausted,
    Game,
    IllegalMove,
    InvariantViolation,
    ParseError,
    compile_qdimacs,
    enumerate_formulas,
    evaluate_qdimacs,
    run_atlas,
    solve,
    verify_qdimacs,
)

__all__ = [
    "BudgetExhausted",
    "Game",
    "IllegalMove",
    "InvariantViolation",
    "ParseError",
    "compile_qdimacs",
    "enumerate_formulas",
    "evaluate_qdimacs",
    "run_atlas",
    "solve",
    "verify_qdimacs",
]
