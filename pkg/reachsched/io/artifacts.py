import hashlib
import json
import logging
import os

import numpy as np

from reachsched import constants

logger = logging.getLogger("Artifacts")


def _to_builtin(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    raise TypeError("{!r} is not JSON serializable".format(obj))


def save_json(path, data):
    """ Write ``data`` as sorted, indented JSON; identical data gives identical bytes. """
    with open(path, 'w') as f:
        json.dump(data, f, indent=2, sort_keys=True, default=_to_builtin)
        f.write("\n")
    return path


def save_csv(path, rows, header):
    """ Write a numeric table with a comma separated header line. """
    np.savetxt(path, np.atleast_2d(rows), delimiter=",", header=",".join(header), comments="", fmt="%.12g")
    return path


def file_hash(path):
    sha = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            sha.update(chunk)
    return sha.hexdigest()


def indexed_name(name, index):
    """ reference.json, 1 -> reference_1.json """
    root, ext = os.path.splitext(name)
    return "{}_{}{}".format(root, index, ext)


def manifest_name(stage):
    return indexed_name(constants.sMANIFEST_JSON, stage)


def write_manifest(out_dir, stage, inputs, outputs, seeds=None, timings=None):
    """ Record content hashes of the stage's input and output files together with seeds and timings.

    :param out_dir: output directory
    :param stage: stage name, the manifest is written to manifest_<stage>.json
    :param inputs: paths read by the stage
    :param outputs: paths written by the stage
    :return: path of the manifest
    """
    def hashes(paths):
        return {os.path.basename(p): file_hash(p) for p in sorted(paths) if os.path.isfile(p)}

    data = {"stage": stage, "inputs": hashes(inputs), "outputs": hashes(outputs), "seeds": seeds or {},
            "timings": timings or {}}
    path = save_json(os.path.join(out_dir, manifest_name(stage)), data)
    logger.debug("manifest for stage {} written to {}".format(stage, path))
    return path
