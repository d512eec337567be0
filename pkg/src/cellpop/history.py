"""Bounded linear undo/redo over view configs.

Stacks are immutable; every operation returns a new stack, so a session can
hand out references without defensive copying.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import ViewConfig

MAX_DEPTH = 100


@dataclass(frozen=True)
class HistoryStack:
    """past (oldest first), the present config, and the redo queue."""

    past: tuple[ViewConfig, ...]
    present: ViewConfig
    future: tuple[ViewConfig, ...]


def new_stack(config: ViewConfig) -> HistoryStack:
    return HistoryStack(past=(), present=config, future=())


def push(stack: HistoryStack, config: ViewConfig) -> HistoryStack:
    """Make config the present state.

    Pushing a config structurally equal to the present one is a no-op, so
    adjacent duplicates never enter the history. A real push clears the
    redo queue and evicts the oldest past entry beyond the depth bound.
    """
    if config == stack.present:
        return stack
    past = stack.past + (stack.present,)
    if len(past) > MAX_DEPTH:
        past = past[-MAX_DEPTH:]
    return HistoryStack(past=past, present=config, future=())


def undo(stack: HistoryStack) -> HistoryStack:
    """Step back once; no-op on an empty past."""
    if not stack.past:
        return stack
    return HistoryStack(
        past=stack.past[:-1],
        present=stack.past[-1],
        future=(stack.present,) + stack.future,
    )


def redo(stack: HistoryStack) -> HistoryStack:
    """Inverse of undo; no-op on an empty future."""
    if not stack.future:
        return stack
    return HistoryStack(
        past=stack.past + (stack.present,),
        present=stack.future[0],
        future=stack.future[1:],
    )
