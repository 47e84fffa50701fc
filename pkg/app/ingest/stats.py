"""
Corpus statistics.
"""
from collections import namedtuple

DatasetStats = namedtuple(
    'DatasetStats', ['n_users', 'n_items', 'n_interactions', 'density']
)


def dataset_stats(ds):
    """Return user, item and interaction counts and the matrix density."""
    n_users, n_items, n_interactions = ds.n_users, ds.n_items, len(ds)
    if n_users == 0 or n_items == 0:
        density = 0.0
    else:
        density = n_interactions / (n_users * n_items)
    return DatasetStats(n_users, n_items, n_interactions, density)
