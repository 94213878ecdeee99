"""Anonymized downlink from the scheduler to the appliances.

Instead of addressing appliances by id, the scheduler broadcasts one
admission threshold per queue: every appliance that arrived at or before
the cutoff epoch switches on.  The cutoff for queue q at epoch l is

    T_q(l) = max{tau <= l : a_q(tau) <= d_q(l)}

with d_q(l) the optimal cumulative departure count.  When d_q(l) falls
strictly inside an arrival batch no epoch-granular cutoff reproduces it,
so the message also carries a spill count: how many appliances of the
first batch after the cutoff are admitted, lowest arrival sequence
first.  The spill is always smaller than that batch, and a cutoff of
``None`` (nobody fully admitted) pins the batch to epoch 0.  Messages
stay anonymous: they hold per-queue epochs and counts, never appliance
identifiers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .csvio import write_csv
from .errors import ConfigurationError
from .queues import QueueLedger


@dataclass(frozen=True)
class ThresholdMessage:
    """One broadcast: per-queue admission cutoffs at ``epoch``.

    ``cutoffs[q]`` is the last fully admitted arrival epoch (None when
    even the epoch-0 batch is only partially admitted); ``spill[q]``
    counts the extra admissions from the first batch after the cutoff.
    """

    epoch: int
    cutoffs: tuple
    spill: tuple

    def __post_init__(self):
        object.__setattr__(self, "cutoffs", tuple(self.cutoffs))
        object.__setattr__(self, "spill", tuple(int(s) for s in self.spill))
        if self.epoch < 0:
            raise ConfigurationError(f"epoch must be >= 0, got {self.epoch}")
        if len(self.cutoffs) != len(self.spill):
            raise ConfigurationError("cutoffs and spill must have one entry per queue")
        for q, (cut, spill) in enumerate(zip(self.cutoffs, self.spill)):
            if cut is not None and not 0 <= cut <= self.epoch:
                raise ConfigurationError(
                    f"queue {q + 1} cutoff {cut} outside [0, {self.epoch}]"
                )
            if spill < 0:
                raise ConfigurationError(f"queue {q + 1} spill must be >= 0")
            if cut == self.epoch and spill != 0:
                raise ConfigurationError(
                    f"queue {q + 1} spill past the message epoch"
                )

    @property
    def n_queues(self) -> int:
        return len(self.cutoffs)


def encode_thresholds(ledger: QueueLedger, targets, epoch: int) -> ThresholdMessage:
    """Map cumulative departure targets to an admission-threshold message.

    ``targets[q]`` is d_q(epoch), the number of queue-q appliances that
    must have started by ``epoch``; it may not exceed the arrivals
    recorded through ``epoch``.
    """
    if epoch < 0:
        raise ConfigurationError(f"epoch must be >= 0, got {epoch}")
    targets = np.asarray(targets)
    if targets.shape != (ledger.n_queues,):
        raise ConfigurationError(
            f"targets shape {targets.shape}, expected ({ledger.n_queues},)"
        )
    if not np.issubdtype(targets.dtype, np.integer):
        rounded = np.rint(np.asarray(targets, dtype=float))
        if not np.allclose(targets, rounded, atol=1e-9):
            raise ConfigurationError("departure targets must be integers")
        targets = rounded.astype(np.int64)
    if (targets < 0).any():
        raise ConfigurationError("departure targets must be >= 0")
    cum = np.cumsum(ledger.arrival_increments(0, epoch + 1), axis=1)
    if (targets > cum[:, -1]).any():
        q = int(np.argmax(targets - cum[:, -1]))
        raise ConfigurationError(
            f"target {int(targets[q])} exceeds the {int(cum[q, -1])} arrivals "
            f"recorded for queue {q + 1} through epoch {epoch}"
        )
    cutoffs = []
    spill = []
    for q in range(ledger.n_queues):
        d = int(targets[q])
        admitted_epochs = np.nonzero(cum[q] <= d)[0]
        if admitted_epochs.size == 0:
            cutoffs.append(None)
            spill.append(d)
        else:
            cut = int(admitted_epochs[-1])
            cutoffs.append(cut)
            spill.append(d - int(cum[q, cut]))
    return ThresholdMessage(epoch=epoch, cutoffs=tuple(cutoffs), spill=tuple(spill))


def decode_and_admit(arrival_log, message: ThresholdMessage,
                     already_admitted=frozenset()) -> set:
    """Appliances switched on by ``message``, as indices into ``arrival_log``.

    ``arrival_log`` is the recording-ordered list of (epoch, queue_index)
    pairs kept by the ledger; an appliance's identity is its position in
    that log, and its within-batch sequence number is its rank among
    same-epoch, same-queue entries.  Admits every appliance at or before
    its queue's cutoff plus the first ``spill`` of the following batch,
    minus anything in ``already_admitted``; re-applying the same message
    therefore admits nothing new.
    """
    new = set()
    batch_rank = [0] * message.n_queues
    for idx, (epoch, q) in enumerate(arrival_log):
        if not 0 <= q < message.n_queues:
            raise ConfigurationError(f"arrival log names unknown queue index {q}")
        cut = message.cutoffs[q]
        batch_epoch = 0 if cut is None else cut + 1
        if cut is not None and epoch <= cut:
            new.add(idx)
        elif epoch == batch_epoch:
            if batch_rank[q] < message.spill[q]:
                new.add(idx)
            batch_rank[q] += 1
    return new - set(already_admitted)


def message_log_to_csv(messages, path) -> None:
    """One row per (epoch, queue); absent cutoffs are written as -1."""
    rows = []
    for msg in messages:
        for q in range(msg.n_queues):
            cut = msg.cutoffs[q]
            rows.append((msg.epoch, q + 1, -1 if cut is None else cut))
    write_csv(path, ["epoch", "queue", "cutoff"], rows)
