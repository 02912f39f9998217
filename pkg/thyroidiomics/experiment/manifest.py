"""
Dataset manifest

A manifest is a JSON document listing every case with its center, pathology
label and SCIN file paths. Paths are stored relative to the manifest file::

    {"cases": [{"case_id": "c01_MNG_000", "center_id": 1, "label": "MNG",
                "image": "center_01/c01_MNG_000_image.json",
                "physician_mask": "center_01/c01_MNG_000_mask.json",
                "predicted_mask": "center_01/c01_MNG_000_pred.json"}]}
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from ..errors import InvalidArgumentError, MissingFileError, SchemaError
from ..evaluation.metrics import CATEGORIES
from ..utils.file_utils import read_json_file, write_json_file

logger = logging.getLogger(__name__)

MASK_SOURCES = ("physician", "predicted")


@dataclass(frozen=True)
class CaseRecord:
    case_id: str
    center_id: int
    label: str
    image: Path
    physician_mask: Path
    predicted_mask: Optional[Path] = None

    def mask(self, source: str) -> Path:
        """Mask path for ``physician`` or ``predicted``"""
        if source == "physician":
            return self.physician_mask
        if source == "predicted":
            if self.predicted_mask is None:
                raise MissingFileError(f"case {self.case_id} has no predicted mask")
            return self.predicted_mask
        raise InvalidArgumentError(f"mask source must be one of {MASK_SOURCES}, got {source!r}")

    def files(self) -> List[Path]:
        paths = [self.image, self.physician_mask]
        if self.predicted_mask is not None:
            paths.append(self.predicted_mask)
        return paths


@dataclass(frozen=True)
class DatasetManifest:
    """All cases of a dataset, in file order"""

    cases: Tuple[CaseRecord, ...]

    def __post_init__(self) -> None:
        seen = set()
        for case in self.cases:
            if case.case_id in seen:
                raise SchemaError(f"duplicate case_id {case.case_id!r}")
            seen.add(case.case_id)
            if case.label not in CATEGORIES:
                raise SchemaError(f"case {case.case_id}: label must be one of {list(CATEGORIES)}, got {case.label!r}")
            if case.center_id < 1:
                raise SchemaError(f"case {case.case_id}: center_id must be >= 1")

    def __len__(self) -> int:
        return len(self.cases)

    @property
    def centers(self) -> List[int]:
        return sorted({case.center_id for case in self.cases})

    def by_center(self, center_id: int) -> List[CaseRecord]:
        return [case for case in self.cases if case.center_id == center_id]

    def case(self, case_id: str) -> CaseRecord:
        for case in self.cases:
            if case.case_id == case_id:
                return case
        raise InvalidArgumentError(f"unknown case {case_id!r}")

    def check_files(self, require_predicted: bool = False) -> None:
        """
        Raises:
            MissingFileError: If a referenced file (or a required predicted mask) is absent
        """
        for case in self.cases:
            if require_predicted and case.predicted_mask is None:
                raise MissingFileError(f"case {case.case_id} has no predicted mask")
            for path in case.files():
                if not path.exists():
                    raise MissingFileError(f"{path} (case {case.case_id})")

    @classmethod
    def from_dict(cls, data: Any, root: Path) -> "DatasetManifest":
        if not isinstance(data, dict) or not isinstance(data.get("cases"), list):
            raise SchemaError("manifest must be an object with a 'cases' list")
        cases = []
        for index, entry in enumerate(data["cases"]):
            try:
                predicted = entry.get("predicted_mask")
                cases.append(
                    CaseRecord(
                        case_id=str(entry["case_id"]),
                        center_id=int(entry["center_id"]),
                        label=str(entry["label"]),
                        image=root / entry["image"],
                        physician_mask=root / entry["physician_mask"],
                        predicted_mask=root / predicted if predicted else None,
                    )
                )
            except (KeyError, TypeError, ValueError, AttributeError) as exc:
                raise SchemaError(f"manifest case #{index}: {exc}") from exc
        return cls(tuple(cases))

    def to_dict(self, root: Path) -> Dict[str, Any]:
        def rel(path: Path) -> str:
            try:
                return Path(path).relative_to(root).as_posix()
            except ValueError:
                return Path(path).as_posix()

        entries = []
        for case in self.cases:
            entry: Dict[str, Any] = {
                "case_id": case.case_id,
                "center_id": case.center_id,
                "label": case.label,
                "image": rel(case.image),
                "physician_mask": rel(case.physician_mask),
            }
            if case.predicted_mask is not None:
                entry["predicted_mask"] = rel(case.predicted_mask)
            entries.append(entry)
        return {"cases": entries}


def load_manifest(path: Union[str, Path], check_files: bool = True) -> DatasetManifest:
    """
    Read a manifest and resolve its paths against the manifest's directory

    Raises:
        MissingFileError: If the manifest or (with ``check_files``) a referenced file is absent
        SchemaError: If the document is malformed
    """
    path = Path(path)
    manifest = DatasetManifest.from_dict(read_json_file(path), path.parent)
    if check_files:
        manifest.check_files()
    logger.debug("Loaded manifest %s: %d cases, centers %s", path, len(manifest), manifest.centers)
    return manifest


def save_manifest(manifest: DatasetManifest, path: Union[str, Path]) -> Path:
    path = Path(path)
    write_json_file(path, manifest.to_dict(path.parent))
    return path
