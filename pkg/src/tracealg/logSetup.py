import json
import logging
import sys


class JsonLogFormatter(logging.Formatter):
    """One JSON object per line with ts, src, kind and data keys.

    Messages written as "Component: text" report Component as src.
    """

    def format(self, record: logging.LogRecord) -> str:
        message = record.getMessage()
        source, sep, rest = message.partition(": ")
        if not sep or " " in source:
            source, rest = record.name, message
        entry = {
            "ts": int(record.created * 1e9),
            "src": source,
            "kind": record.levelname.lower(),
            "data": rest,
        }
        if record.exc_info:
            entry["exc"] = self.formatException(record.exc_info)
        return json.dumps(entry)


def configureLogging(level: str = "INFO", asJson: bool = False) -> None:
    handler = logging.StreamHandler(sys.stderr)
    if asJson:
        handler.setFormatter(JsonLogFormatter())
    else:
        handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    logging.basicConfig(level=level, handlers=[handler], force=True)
