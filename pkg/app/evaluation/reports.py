"""
Tab-separated evaluation, comparison and latency report files.

Each evaluation report is written as a one-row table plus a JSON sidecar
holding the per-user vectors, which ``comparison_table`` needs for the
significance block.
"""
import json

from core.exceptions import ArtifactMismatchError
from evaluation.protocol import EvalReport
from evaluation.significance import (
    SIGNIFICANCE_LEVEL,
    is_significant,
    paired_t_test,
)

MISSING = '-'
DEFAULT_PRECISION = 6


def sidecar_path(path):
    return f'{path}.json'


def _number(value, precision):
    if value is None:
        return MISSING
    return f'{value:.{precision}f}'


def relative_improvement(value, baseline):
    """Percentage change of ``value`` over ``baseline``; None if undefined."""
    if not baseline:
        return None
    return (value - baseline) / baseline * 100.0


def _header_line(reports):
    first = reports[0]
    return (f'# recbench report K={first.K} M={first.M} '
            f'split_hash={first.split_hash or MISSING}')


def table_rows(reports, precision=DEFAULT_PRECISION):
    K = reports[0].K
    rows = [
        '\t'.join([
            'model', f'HR@{K}', f'nDCG@{K}', 'sec_per_entry', 'category',
            'HR_improvement_%', 'nDCG_improvement_%',
        ])
    ]
    baseline = reports[0]
    for report in reports:
        rows.append('\t'.join([
            report.model,
            _number(report.hit_rate, precision),
            _number(report.ndcg, precision),
            _number(report.sec_per_entry, precision + 3),
            report.category or MISSING,
            _number(relative_improvement(report.hit_rate,
                                         baseline.hit_rate), 2),
            _number(relative_improvement(report.ndcg, baseline.ndcg), 2),
        ]))
    return rows


def check_comparable(reports):
    first = reports[0]
    for report in reports[1:]:
        if report.split_hash != first.split_hash:
            raise ArtifactMismatchError(
                f'{report.model} was evaluated on split {report.split_hash}'
                f', {first.model} on {first.split_hash}'
            )
        if report.K != first.K:
            raise ArtifactMismatchError(
                f'{report.model} uses K={report.K}, {first.model} '
                f'K={first.K}'
            )
        if not report.aligned_with(first):
            raise ArtifactMismatchError(
                f'{report.model} and {first.model} were evaluated on '
                'different users'
            )


def significance_tests(reports, metric='ndcg'):
    """t-test of every report against the first, on ``metric``."""
    baseline = reports[0]
    return [
        (report, baseline,
         paired_t_test(report.metric(metric), baseline.metric(metric)))
        for report in reports[1:]
    ]


def significance_rows(reports, metric='ndcg', precision=DEFAULT_PRECISION):
    level = f'{SIGNIFICANCE_LEVEL:g}'
    rows = ['\t'.join([f'comparison ({metric})', 't', 'p',
                       f'significant@{level}'])]
    for report, baseline, result in significance_tests(reports, metric):
        rows.append('\t'.join([
            f'{report.model} vs {baseline.model}',
            _number(result.t, precision),
            _number(result.p, precision),
            'yes' if is_significant(result) else 'no',
        ]))
    return rows


def comparison_table(reports, metric='ndcg', precision=DEFAULT_PRECISION):
    """The full report text for one or more evaluation reports."""
    if not reports:
        raise ValueError('Nothing to report')
    check_comparable(reports)
    lines = [_header_line(reports)]
    lines += table_rows(reports, precision)
    if len(reports) > 1:
        lines.append('')
        lines += significance_rows(reports, metric, precision)
    return '\n'.join(lines) + '\n'


def write_eval_report(report, path, precision=DEFAULT_PRECISION):
    """Write the report table and its per-user sidecar."""
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(comparison_table([report], precision=precision))
    with open(sidecar_path(path), 'w', encoding='utf-8') as handle:
        json.dump(report.as_dict(), handle, sort_keys=True)


def read_eval_report(path):
    try:
        with open(sidecar_path(path), encoding='utf-8') as handle:
            return EvalReport.from_dict(json.load(handle))
    except FileNotFoundError as exc:
        raise FileNotFoundError(
            f'{path}: per-user data {sidecar_path(path)} is missing'
        ) from exc


def write_comparison(reports, path, metric='ndcg',
                     precision=DEFAULT_PRECISION):
    text = comparison_table(reports, metric, precision)
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(text)
    return text


def write_per_user(report, path, user_ids, precision=DEFAULT_PRECISION):
    """``user<TAB>HR<TAB>nDCG`` per evaluated user, ids as in the corpus."""
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write('user\tHR\tnDCG\n')
        for user, hr, ndcg in zip(report.users, report.hit_rates,
                                  report.ndcgs):
            handle.write(f'{user_ids[user]}\t{hr:.{precision}f}\t'
                         f'{ndcg:.{precision}f}\n')


def latency_rows(results):
    """``model<TAB>mode<TAB>sec_per_entry<TAB>entries<TAB>batch_size``."""
    rows = ['model\tmode\tsec_per_entry\tentries\tbatch_size']
    for label, result in results:
        rows.append(f'{label}\t{result.mode}\t{result.sec_per_entry:.9f}\t'
                    f'{result.entries}\t{result.batch_size}')
    return rows


def write_latency_table(results, path):
    text = '\n'.join(latency_rows(results)) + '\n'
    with open(path, 'w', encoding='utf-8') as handle:
        handle.write(text)
    return text


def read_latency_table(path):
    """Map model label -> single-thread sec_per_entry."""
    latencies = {}
    with open(path, encoding='utf-8') as handle:
        next(handle, None)
        for line in handle:
            fields = line.rstrip('\n').split('\t')
            if len(fields) >= 3 and fields[1] == 'single-thread':
                latencies[fields[0]] = float(fields[2])
    return latencies
