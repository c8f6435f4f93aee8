from typing import Any, Dict

import numpy as np
from pydantic import BaseModel, ConfigDict


class BaseOutput(BaseModel):
    """
    Base class for every immutable record produced or consumed by pselect.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    def to_dict(self) -> Dict[str, Any]:
        """
        Dump the record with numpy arrays converted to nested lists.

        Returns:
            output (Dict[str, Any]): plain python representation.
        """
        return _plain(self.model_dump())


def _plain(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value
