"""postimager: weighted image prompts for support-seeking post drafts.

Subpackages and modules map one-to-one onto the system's parts: text
primitives (textkit), curated word resources (lexicons), emotion detection
(emotion), prompt construction (promptgen), the composer state machine
(session), generation/retrieval clients (backends), the HTTP facade
(service), persistence (store), the statistics kit (evalkit), and the
batch CLI (cli).
"""

__version__ = "0.1.0"
