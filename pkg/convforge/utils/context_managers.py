import logging
from time import perf_counter
from typing import TYPE_CHECKING, Any, Optional, Type

if TYPE_CHECKING:
    from logging import Logger
    from types import TracebackType

lib_logger = logging.getLogger(__name__)


class log_execution_time:
    def __init__(self, log_message: str, logger: Optional["Logger"] = None, **context: Any) -> None:
        self.log_message = log_message
        self.logger = logger or lib_logger
        self.context = context
        self.elapsed = 0.0

    def __enter__(self) -> "log_execution_time":
        self.start_time = perf_counter()
        return self

    def __exit__(
        self, exc_type: Type[BaseException] | None, exc_val: BaseException | None, exc_tb: Optional["TracebackType"]
    ) -> None:
        self.elapsed = perf_counter() - self.start_time
        logged_time = "{:.3f}".format(self.elapsed)
        result = "succeeded" if exc_type is None else "failed"
        context = "".join(f" {k}={v}" for k, v in self.context.items())

        self.logger.info(f"{self.log_message} {result} in {logged_time}s{context}")
