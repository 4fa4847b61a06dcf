"""Machine-readable run reports emitted by the command line front end.

A report serializes to JSON (schema version 1) and to a plain text format
with one ``key = <json value>`` line per field; both round-trip losslessly.
"""

import json
from dataclasses import asdict, dataclass, field

__all__ = ["RunReport", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1


@dataclass
class RunReport:
    """Result summary of one CLI invocation.

    ``inputs`` carries the dimension summary (n, r, symmetric flag);
    eigenvalues are (real, imaginary) pairs; the structure fields hold zero
    eigenvalue block-size lists when the command measures them; ``bench``
    holds timing details for benchmark runs.
    """

    schema: int = SCHEMA_VERSION
    command: str = ""
    inputs: dict = field(default_factory=dict)
    eigenvalues: list | None = None
    dropped: int | None = None
    residual_max: float | None = None
    flops_model_lowrank: int | None = None
    flops_model_dense: int | None = None
    wall_time_seconds: float = 0.0
    structure_predicted: list | None = None
    structure_measured: list | None = None
    match: bool | None = None
    bench: dict | None = None
    notes: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        if data.get("schema") != SCHEMA_VERSION:
            raise ValueError(
                f"unsupported report schema {data.get('schema')!r}; this "
                f"version reads schema {SCHEMA_VERSION}"
            )
        return cls(**data)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_text(self):
        """One ``key = <json>`` line per field, in schema order."""
        return "\n".join(
            f"{key} = {json.dumps(value)}" for key, value in self.to_dict().items()
        )

    @classmethod
    def from_text(cls, text):
        data = {}
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            key, sep, value = line.partition(" = ")
            if not sep:
                raise ValueError(f"malformed report line: {line!r}")
            data[key] = json.loads(value)
        return cls.from_dict(data)
