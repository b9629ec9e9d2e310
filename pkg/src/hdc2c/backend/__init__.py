"""C code generation: layout planning, template fragments, emission."""

from .emit import EmittedArtifact, emit
from .plan import CodegenPlan, plan_layout
from .templates import TemplateFragment, load_fragment

__all__ = [
    "CodegenPlan",
    "EmittedArtifact",
    "TemplateFragment",
    "emit",
    "load_fragment",
    "plan_layout",
]
