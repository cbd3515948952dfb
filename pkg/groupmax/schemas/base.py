from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer


class GroupMaxBaseModel(BaseModel):
    """
    Base model for configuration blocks and reports.

    - Unknown keys are rejected, so a misspelled config key fails validation
    and the error names it.
    - Instances are frozen once validated.
    - Auto-serialization: numpy scalars and arrays become plain Python values,
    enums become their values.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    @field_serializer("*")
    def serialize_any(self, value):
        """Global serializer for numpy and enum values"""

        if isinstance(value, Enum):
            return value.value

        if isinstance(value, np.ndarray):
            return value.tolist()

        if isinstance(value, np.generic):
            return value.item()

        if isinstance(value, (list, tuple)):
            return [self.serialize_any(item) for item in value]

        if isinstance(value, dict):
            return {key: self.serialize_any(val) for key, val in value.items()}

        return value
