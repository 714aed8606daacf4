"""Text rendering of suite reports and the qubit demo.

Example usage:
    from extlin.core.laws import run_suite
    from extlin.core.render import Renderer

    renderer = Renderer()
    print(renderer.reports([run_suite("distributivity", cases=5)]))
"""

import json
import logging
from pathlib import Path
from typing import Any, List, Sequence

from jinja2 import ChoiceLoader, Environment, FileSystemLoader, PackageLoader, StrictUndefined

from .laws import Report
from .quantum import QubitReport

logger = logging.getLogger(__name__)


def compact_json(value: Any) -> str:
    return json.dumps(value, sort_keys=True, ensure_ascii=False)


class Renderer:
    """Jinja2 environment over the packaged templates.

    Args:
        template_dir: Optional directory whose templates override the built-in ones
    """

    def __init__(self, template_dir: str | None = None):
        loaders = []
        if template_dir:
            path = Path(template_dir)
            if path.is_dir():
                loaders.append(FileSystemLoader(str(path)))
        loaders.append(PackageLoader("extlin", "templates"))
        self.env = Environment(
            loader=ChoiceLoader(loaders),
            keep_trailing_newline=True,
            trim_blocks=True,
            lstrip_blocks=True,
            undefined=StrictUndefined,
        )
        self.env.filters["json"] = compact_json

    def reports(self, reports: Sequence[Report]) -> str:
        failed: List[str] = [r.suite for r in reports if not r.passed]
        logger.debug("rendering %d reports, %d failed", len(reports), len(failed))
        return self.env.get_template("report.txt.j2").render(reports=reports, failed=failed)

    def qubit(self, report: QubitReport) -> str:
        return self.env.get_template("qubit.txt.j2").render(report=report)
