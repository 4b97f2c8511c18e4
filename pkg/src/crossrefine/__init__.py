"""Generator/critic cross-refinement of natural language explanations.

Submodules: corpus (datasets), prompting (templates and demonstrations),
backend (model clients), refinery (the pipeline engine), metrics (scoring),
analysis (filters, language ID, agreement, similarity), reporting (tables
and figures), cli (operator surface).
"""

__version__ = "0.1.0"
