"""
Output files and run manifests
"""
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import pandas as pd

from eventperp.app.models import RunManifest
from eventperp.config.settings import ARTIFACT_VERSION

logger = logging.getLogger(__name__)

STDOUT_NAME = '<stdout>'


def dumps(data: Any) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline"""
    return json.dumps(data, sort_keys=True, indent=2) + '\n'


def sha256_file(path: Union[str, Path]) -> str:
    digest = hashlib.sha256()
    with open(path, 'rb') as handle:
        for chunk in iter(lambda: handle.read(65536), b''):
            digest.update(chunk)
    return digest.hexdigest()


def _manifest(command: str, config_path: Optional[str], seeds: Sequence[int], hashes: Dict[str, str],
              parameters: Optional[Dict[str, Any]]) -> RunManifest:
    combined = hashlib.sha256()
    for p in sorted(hashes):
        combined.update(f"{Path(p).name}:{hashes[p]}\n".encode('utf-8'))
    return RunManifest(
        command=command,
        config_path=config_path,
        seeds=list(seeds),
        output_paths=list(hashes),
        artifact_version=ARTIFACT_VERSION,
        output_hashes=dict(hashes),
        content_hash=combined.hexdigest(),
        parameters=dict(parameters or {}),
    )


class OutputService:
    """Writes JSON and CSV outputs and the manifest describing them"""

    @staticmethod
    def write_json(path: Union[str, Path], data: Any) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dumps(data), encoding='utf-8')
        logger.debug(f"Wrote {path}")
        return path

    @staticmethod
    def write_csv(path: Union[str, Path], frame: pd.DataFrame) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, lineterminator='\n')
        logger.debug(f"Wrote {path} ({len(frame)} rows)")
        return path

    @staticmethod
    def build_manifest(command: str, config_path: Optional[str], seeds: Sequence[int],
                       outputs: Sequence[Union[str, Path]], parameters: Optional[Dict[str, Any]] = None) -> RunManifest:
        """
        Hash every output; the content hash covers the per-file hashes in path order

        Paths are recorded as given so identical invocations give identical manifests.
        """
        paths: List[str] = [str(p) for p in outputs]
        return _manifest(command, config_path, seeds, {p: sha256_file(p) for p in paths}, parameters)

    @staticmethod
    def build_stream_manifest(command: str, config_path: Optional[str], text: str,
                              parameters: Optional[Dict[str, Any]] = None, name: str = STDOUT_NAME) -> RunManifest:
        """Manifest for output written to a stream; `name` stands in for the path"""
        digest = hashlib.sha256(text.encode('utf-8')).hexdigest()
        return _manifest(command, config_path, [], {name: digest}, parameters)

    @staticmethod
    def write_manifest(out_dir: Union[str, Path], manifest: RunManifest) -> Path:
        path = Path(out_dir) / 'manifest.json'
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(manifest.to_json() + '\n', encoding='utf-8')
        logger.info(f"Manifest written to {path} (content hash {manifest.content_hash[:12]})")
        return path
