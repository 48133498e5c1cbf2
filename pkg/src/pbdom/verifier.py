"""Drive a configuration through a parsed proof."""

from __future__ import annotations

from typing import Callable, Iterable

from . import formats as fm
from .formats import FormatError, ParsedInstance
from .state import Configuration, Mode, ProofError, Verdict
from .strengthening import apply_dominance, apply_redundance, define_preorder

TraceHook = Callable[[int, str, list[int]], None]
StepHook = Callable[[Configuration, fm.Command], None]

RULE_NAMES = {fm.Pol: "pol", fm.Rup: "rup", fm.Red: "red", fm.Dom: "dom", fm.DelDerived: "del",
              fm.DelCore: "delc", fm.CoreTransfer: "core", fm.Sol: "sol",
              fm.PreOrder: "pre_order", fm.LoadOrder: "load_order"}


def _sol_values(cmd: fm.Sol) -> dict[int, bool]:
    values: dict[int, bool] = {}
    for lit in cmd.literals:
        var = abs(lit)
        if var in values and values[var] != (lit > 0):
            raise ProofError("sol: contradictory literals", cmd.line)
        values[var] = lit > 0
    return values


def execute(cfg: Configuration, cmd: fm.Command) -> list[int]:
    """Apply one command; returns the ids it created."""
    line = cmd.line
    if isinstance(cmd, fm.Pol):
        return [cfg.apply_pol(cmd.tokens, line)]
    if isinstance(cmd, fm.Rup):
        return [cfg.apply_rup(cmd.constraint, line)]
    if isinstance(cmd, fm.Dom):
        return [apply_dominance(cfg, cmd.constraint, cmd.witness, cmd.subproofs, line)]
    if isinstance(cmd, fm.Red):
        return [apply_redundance(cfg, cmd.constraint, cmd.witness, cmd.subproofs, line)]
    if isinstance(cmd, fm.DelDerived):
        cfg.delete_derived(cmd.ids, line)
        return []
    if isinstance(cmd, fm.DelCore):
        if cmd.witness is None and cfg.mode is Mode.UNCHECKED:
            cfg.delete_core_unchecked(cmd.ids, line)
        else:
            for cid in cmd.ids:
                cfg.delete_core_checked(cid, cmd.witness, cmd.subproofs, line, cmd.end_line)
        return []
    if isinstance(cmd, fm.CoreTransfer):
        cfg.transfer_to_core(cmd.ids, line)
        return []
    if isinstance(cmd, fm.Sol):
        return [cfg.apply_sol(_sol_values(cmd), line)]
    if isinstance(cmd, fm.PreOrder):
        cfg.register_order(define_preorder(cmd), line)
        return []
    if isinstance(cmd, fm.LoadOrder):
        cfg.load_order(cmd.name, cmd.variables, line)
        return []
    raise ProofError(f"command {type(cmd).__name__} not allowed here", line)


def _check_output(cfg: Configuration, cmd: fm.Output) -> None:
    if cmd.kind == "NONE":
        return
    ids = set(cmd.ids)
    if len(ids) != len(cmd.ids):
        raise ProofError("output: duplicate constraint id", cmd.line)
    if cmd.declared_constraints is not None and cmd.declared_constraints != len(ids):
        raise ProofError(f"output: header declares {cmd.declared_constraints} constraints, "
                         f"list has {len(ids)}", cmd.line)
    core_ids = set(cfg.core)
    if ids != core_ids:
        extra = sorted(ids - core_ids)
        missing = sorted(core_ids - ids)
        detail = f"{extra[0]} is not a core constraint" if extra else \
            f"core constraint {missing[0]} is missing"
        raise ProofError(f"output: constraint list differs from the core set ({detail})",
                         cmd.line)


def run_proof(cfg: Configuration, instance: ParsedInstance, proof: Iterable[str],
              trace: TraceHook | None = None, on_step: StepHook | None = None) -> Verdict:
    """Check ``proof`` starting from ``cfg``; raises ``ProofError``/``FormatError``."""
    commands = fm.parse_proof(proof, cfg.vocab)
    verdict: Verdict | None = None
    loaded = False
    for cmd in commands:
        if isinstance(cmd, fm.LoadFormula):
            if loaded:
                raise ProofError("formula loaded twice", cmd.line)
            if cmd.count is not None and cmd.count != instance.formula_count:
                raise FormatError(cmd.line, 3, f"proof expects {cmd.count} constraints, "
                                               f"instance has {instance.formula_count}")
            loaded = True
            continue
        if not loaded:
            raise ProofError("expected 'f' to load the formula", cmd.line)
        if isinstance(cmd, fm.End):
            if verdict is None:
                raise ProofError("proof ends without a conclusion", cmd.line)
            continue
        if verdict is not None:
            raise ProofError("no commands allowed after the conclusion", cmd.line)
        if isinstance(cmd, fm.Output):
            _check_output(cfg, cmd)
            continue
        if isinstance(cmd, fm.Conclusion):
            verdict = cfg.conclude(cmd.claim, cmd.value, cmd.line)
            continue
        created = execute(cfg, cmd)
        if trace is not None:
            trace(cmd.line, RULE_NAMES[type(cmd)], created)
        if on_step is not None:
            on_step(cfg, cmd)
    assert verdict is not None
    return verdict


def verify(instance: ParsedInstance, proof: Iterable[str] | str, mode: Mode = Mode.CHECKED,
           trace: TraceHook | None = None, on_step: StepHook | None = None) -> Verdict:
    """Verify a proof for ``instance``; raises on rejection."""
    if isinstance(proof, str):
        proof = proof.splitlines()
    cfg = Configuration(instance.constraints, instance.objective, mode, instance.vocab.copy())
    return run_proof(cfg, instance, proof, trace, on_step)
