# app/context.py
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict

from classes.instance_class import Instance
from classes.instance_file_class import resolve_instance
from classes.settings_class import Settings


@dataclass
class AppCtx:
    settings: Settings = field(default_factory=Settings)
    instances: Dict[str, Instance] = field(default_factory=dict)

    def instance(self, spec: str) -> Instance:
        """Resolve once per server lifetime; instances are immutable."""
        if spec not in self.instances:
            self.instances[spec] = resolve_instance(spec, self.settings)
        return self.instances[spec]
