"""
Parse Amazon review records into interactions.
"""
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from core.exceptions import ParseError
from ingest.records import Interaction

logger = logging.getLogger(__name__)

REQUIRED_KEYS = ('reviewerID', 'asin', 'overall')


@dataclass
class ParseStats:
    """Counts of what happened to each input line."""
    lines: int = 0
    parsed: int = 0
    malformed: int = 0
    missing_keys: int = 0
    duplicates: int = 0
    malformed_lines: list = field(default_factory=list)

    @property
    def skipped(self):
        return self.malformed + self.missing_keys

    def merge(self, other):
        self.lines += other.lines
        self.parsed += other.parsed
        self.malformed += other.malformed
        self.missing_keys += other.missing_keys
        self.malformed_lines.extend(other.malformed_lines)


def _record_to_interaction(record):
    """Map one review record to an Interaction, or None if keys are missing."""
    if not isinstance(record, dict):
        raise ValueError('record is not an object')
    if any(record.get(key) in (None, '') for key in REQUIRED_KEYS):
        return None
    timestamp = record.get('unixReviewTime')
    return Interaction(
        user=str(record['reviewerID']),
        item=str(record['asin']),
        rating=float(record['overall']),
        review=str(record.get('reviewText') or ''),
        timestamp=int(timestamp) if timestamp is not None else None,
    )


def _parse_lines(numbered_lines, strict=False):
    """Parse (line number, raw line) pairs.

    Returns (line number, Interaction) pairs and the shard statistics.
    Blank lines are ignored; out-of-range ratings count as malformed.
    """
    stats = ParseStats()
    parsed = []
    for number, raw in numbered_lines:
        if not raw.strip():
            continue
        stats.lines += 1
        try:
            text = raw.decode('utf-8') if isinstance(raw, bytes) else raw
            interaction = _record_to_interaction(json.loads(text))
        except (ValueError, TypeError) as exc:
            if strict:
                raise ParseError(str(exc), line_number=number) from exc
            stats.malformed += 1
            stats.malformed_lines.append(number)
            continue
        if interaction is None:
            stats.missing_keys += 1
            continue
        stats.parsed += 1
        parsed.append((number, interaction))
    return parsed, stats


def _strict_shard(numbered_lines):
    return _parse_lines(numbered_lines, strict=True)


def _lenient_shard(numbered_lines):
    return _parse_lines(numbered_lines, strict=False)


def deduplicate(numbered):
    """Keep one interaction per (user, item) pair.

    The latest timestamp wins; ties go to the later line. Output follows
    the line order of the surviving records.
    """
    best = {}
    for number, interaction in numbered:
        key = (interaction.sort_time, number)
        current = best.get(interaction.pair)
        if current is None or key > current[0]:
            best[interaction.pair] = (key, number, interaction)
    survivors = sorted(best.values(), key=lambda entry: entry[1])
    return [interaction for _, _, interaction in survivors]


class ReviewParser:
    """Line-oriented review parser with skip statistics.

    With ``workers > 1`` the stream is sharded across processes; shards are
    merged by line number before deduplication, so the result does not
    depend on the worker count.
    """

    def __init__(self, strict=False, workers=1, shard_size=50_000):
        self.strict = strict
        self.workers = max(1, int(workers))
        self.shard_size = shard_size
        self.stats = ParseStats()

    def _shards(self, stream):
        shard = []
        for number, raw in enumerate(stream, start=1):
            shard.append((number, raw))
            if len(shard) >= self.shard_size:
                yield shard
                shard = []
        if shard:
            yield shard

    def parse(self, stream):
        """Parse a byte or text line stream into deduplicated interactions."""
        self.stats = ParseStats()
        worker = _strict_shard if self.strict else _lenient_shard
        numbered = []
        if self.workers == 1:
            results = map(worker, self._shards(stream))
            for parsed, stats in results:
                numbered.extend(parsed)
                self.stats.merge(stats)
        else:
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                for parsed, stats in pool.map(worker, self._shards(stream)):
                    numbered.extend(parsed)
                    self.stats.merge(stats)
        numbered.sort(key=lambda entry: entry[0])
        interactions = deduplicate(numbered)
        self.stats.duplicates = len(numbered) - len(interactions)
        if self.stats.skipped:
            logger.warning(
                'Skipped %d of %d review lines (%d malformed, '
                '%d missing fields)',
                self.stats.skipped, self.stats.lines,
                self.stats.malformed, self.stats.missing_keys,
            )
        logger.info(
            'Parsed %d interactions (%d duplicates collapsed)',
            len(interactions), self.stats.duplicates,
        )
        return interactions


def parse_reviews(stream, strict=False, workers=1):
    """Parse review records, one JSON object per line."""
    return ReviewParser(strict=strict, workers=workers).parse(stream)


def interaction_to_record(interaction):
    """Inverse of the parser mapping, used to persist prepared datasets."""
    record = {
        'reviewerID': interaction.user,
        'asin': interaction.item,
        'overall': interaction.rating,
        'reviewText': interaction.review,
    }
    if interaction.timestamp is not None:
        record['unixReviewTime'] = interaction.timestamp
    return record


def write_reviews(interactions, path):
    """Write interactions as review records, one per line."""
    with open(path, 'w', encoding='utf-8') as handle:
        for interaction in interactions:
            handle.write(
                json.dumps(
                    interaction_to_record(interaction),
                    ensure_ascii=False,
                    sort_keys=True,
                )
            )
            handle.write('\n')
