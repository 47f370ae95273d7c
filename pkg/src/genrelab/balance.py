"""Topic- and class-balancing of a corpus manifest.

For every topic, the class with the fewest available texts sets the quota,
and every class then contributes exactly that many documents, sampled
uniformly without replacement.  Sampling uses Python's ``random.Random``
(Mersenne Twister) seeded with the manifest seed over documents sorted by
id, so the selected-id list is reproducible from the manifest alone.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass

from genrelab.corpus import ClassLabel, Manifest
from genrelab.errors import DataError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TopicQuota:
    """Per-topic availability and the resulting per-class quota (the min)."""

    topic: str
    per_class_quota: int
    availability: dict[ClassLabel, int]

    def __post_init__(self):
        expected = min(self.availability.get(label, 0) for label in ClassLabel)
        if self.per_class_quota != expected:
            raise DataError(
                f"topic {self.topic!r}: quota {self.per_class_quota} is not the "
                f"minimum availability {expected}"
            )


def compute_quotas(m: Manifest, topics: list[str]) -> list[TopicQuota]:
    """One quota per listed topic: the minimum class availability."""
    present = m.topics()
    quotas = []
    for topic in topics:
        topic = topic.lower()
        if topic not in present:
            raise DataError(f"topic {topic!r} not present in manifest")
        availability = {
            label: sum(1 for d in m.documents if d.topic == topic and d.label == label)
            for label in ClassLabel
        }
        quota = min(availability.values())
        if quota == 0:
            log.warning("topic %r has quota 0 and contributes no documents", topic)
        quotas.append(TopicQuota(topic=topic, per_class_quota=quota, availability=availability))
    return quotas


def balance_by_topic(m: Manifest, quotas: list[TopicQuota], seed: int) -> Manifest:
    """Sample exactly ``quota`` documents per (topic, class) pair.

    The output manifest preserves the input document order and records the
    sampling seed.
    """
    rng = random.Random(seed)
    selected: set[str] = set()
    for q in quotas:
        for label in ClassLabel:
            pool = sorted(
                d.id for d in m.documents if d.topic == q.topic and d.label == label
            )
            if q.per_class_quota > len(pool):
                raise DataError(
                    f"stale quota: topic {q.topic!r} class {label.slug} has "
                    f"{len(pool)} documents but quota is {q.per_class_quota}"
                )
            selected.update(rng.sample(pool, q.per_class_quota))
    docs = tuple(d for d in m.documents if d.id in selected)
    return Manifest(documents=docs, version=m.version, seed=seed)
