from enum import Enum
from functools import lru_cache
from typing import Dict, Optional


class BaseEnum(Enum):
    @classmethod
    def get_description(cls) -> str:
        return ",".join((str(item.value) for item in cls))

    @classmethod
    @lru_cache
    def by_lowered_values_dict(cls) -> Dict[str, "BaseEnum"]:
        return {str(v.value).lower(): v for v in cls.__members__.values()}

    @classmethod
    def get_by_lowered_value(cls, value: str) -> Optional["BaseEnum"]:
        return cls.by_lowered_values_dict().get(value.lower())


class StrChoicesEnum(str, BaseEnum):
    pass
