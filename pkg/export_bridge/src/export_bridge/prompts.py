"""Instruction prompt for the language checkpoint.

The prompt folds the biasing keywords into a fixed natural-language
instruction; an empty keyword list drops the enumeration sentence and
keeps the rest.  The rendered text is what an ``ExportJob`` carries in
its ``prompt`` field and what the language backend conditions on.
"""

KEYWORD_PLACEHOLDER = "{keywords}"

PROMPT_TEMPLATE = (
    "Transcribe the speech into text. "
    "The following keywords are likely to appear. "
    "Use relevant keywords to improve transcription accuracy and ignore irrelevant ones. "
    "The keywords are {keywords}. "
    "The text corresponding to the speech is:"
)

# Empty-list variant: the keyword enumeration sentence is dropped entirely.
PROMPT_TEMPLATE_EMPTY = (
    "Transcribe the speech into text. "
    "The following keywords are likely to appear. "
    "Use relevant keywords to improve transcription accuracy and ignore irrelevant ones. "
    "The text corresponding to the speech is:"
)


def render_prompt(keyword_surfaces) -> str:
    """Comma-join the keyword surfaces into the instruction template."""
    surfaces = list(keyword_surfaces)
    if not surfaces:
        return PROMPT_TEMPLATE_EMPTY
    return PROMPT_TEMPLATE.replace(KEYWORD_PLACEHOLDER, ", ".join(surfaces))
