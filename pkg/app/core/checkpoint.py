"""
Model checkpoints as ``.npz`` archives.

Each archive holds ``param/<name>`` arrays, the user and item id lists
the indices refer to, and a JSON ``meta`` record with the model kind,
its hyperparameters, the format version and the hashes of the config and
split that produced it.
"""
import json
import logging

import numpy as np

from core.exceptions import ArtifactMismatchError
from core.registry import model_class_for

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
PARAM_PREFIX = 'param/'


def save_checkpoint(model, path, user_ids, item_ids, config_hash='',
                    split_hash=''):
    meta = {
        'format_version': FORMAT_VERSION,
        'kind': model.kind,
        'hyper': model.hyperparameters(),
        'n_users': model.n_users,
        'n_items': model.n_items,
        'config_hash': config_hash,
        'split_hash': split_hash,
    }
    arrays = {
        f'{PARAM_PREFIX}{name}': value for name, value in model.params.items()
    }
    with open(path, 'wb') as handle:
        np.savez(
            handle,
            meta=np.array(json.dumps(meta, sort_keys=True)),
            user_ids=np.array(list(user_ids), dtype=str),
            item_ids=np.array(list(item_ids), dtype=str),
            **arrays,
        )
    logger.info('Saved %s checkpoint to %s', model.kind, path)


def read_checkpoint_meta(path):
    with np.load(path, allow_pickle=False) as archive:
        return json.loads(str(archive['meta']))


def load_checkpoint(path, context=None, user_ids=None, item_ids=None,
                    split_hash=None):
    """Rebuild a model from ``path``.

    When ``user_ids``/``item_ids`` or ``split_hash`` are given they must
    match what the checkpoint was trained on.
    """
    with np.load(path, allow_pickle=False) as archive:
        meta = json.loads(str(archive['meta']))
        if meta.get('format_version') != FORMAT_VERSION:
            raise ArtifactMismatchError(
                f'{path}: checkpoint format {meta.get("format_version")} '
                f'is not {FORMAT_VERSION}'
            )
        stored_users = [str(x) for x in archive['user_ids']]
        stored_items = [str(x) for x in archive['item_ids']]
        params = {
            key[len(PARAM_PREFIX):]: np.array(archive[key], dtype=np.float64)
            for key in archive.files if key.startswith(PARAM_PREFIX)
        }
    if split_hash is not None and meta.get('split_hash') != split_hash:
        raise ArtifactMismatchError(
            f'{path}: trained on split {meta.get("split_hash")}, '
            f'expected {split_hash}'
        )
    if user_ids is not None and list(user_ids) != stored_users:
        raise ArtifactMismatchError(f'{path}: user id mapping differs')
    if item_ids is not None and list(item_ids) != stored_items:
        raise ArtifactMismatchError(f'{path}: item id mapping differs')
    model_class = model_class_for(meta['kind'])
    model = model_class(params, meta['hyper'], meta['n_users'],
                        meta['n_items'], context=context)
    return model, meta
