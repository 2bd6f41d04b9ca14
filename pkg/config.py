"""
Configuración centralizada del kit CSW-GEC.
Carga variables de entorno y define constantes del sistema.
"""

import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()


# ─────────────────────────────────────────────
# Rutas
# ─────────────────────────────────────────────
BASE_DIR = Path(__file__).resolve().parent
DATA_DIR = Path(os.getenv("CSWGEC_DATA_DIR", str(BASE_DIR / "data")))
MANIFEST_DIR = DATA_DIR / "manifests"


# ─────────────────────────────────────────────
# LLM Configuration
# ─────────────────────────────────────────────
LLM_PROVIDER = os.getenv("LLM_PROVIDER", "openai")  # openai | gemini | anthropic

OPENAI_API_KEY = os.getenv("OPENAI_API_KEY", "")
OPENAI_MODEL = os.getenv("OPENAI_MODEL", "gpt-3.5-turbo")

GEMINI_API_KEY = os.getenv("GEMINI_API_KEY", "")
GEMINI_MODEL = os.getenv("GEMINI_MODEL", "gemini-2.0-flash")

ANTHROPIC_API_KEY = os.getenv("ANTHROPIC_API_KEY", "")
ANTHROPIC_MODEL = os.getenv("ANTHROPIC_MODEL", "claude-sonnet-4-20250514")

# Endpoint alternativo (proxy compatible con OpenAI) y variable que guarda la key
LLM_BASE_URL = os.getenv("LLM_BASE_URL", "")
LLM_API_KEY_ENV = os.getenv("LLM_API_KEY_ENV", "")

LLM_TEMPERATURE = float(os.getenv("LLM_TEMPERATURE", "0.7"))
LLM_MAX_TOKENS = int(os.getenv("LLM_MAX_TOKENS", "1024"))


# ─────────────────────────────────────────────
# Generación LLM: presupuesto y reintentos
# ─────────────────────────────────────────────
LLM_MAX_REQUESTS = int(os.getenv("LLM_MAX_REQUESTS", "100"))   # presupuesto de peticiones
LLM_RETRY_LIMIT = int(os.getenv("LLM_RETRY_LIMIT", "3"))
LLM_BACKOFF_SECONDS = float(os.getenv("LLM_BACKOFF_SECONDS", "15"))
LLM_MAX_IN_FLIGHT = int(os.getenv("LLM_MAX_IN_FLIGHT", "4"))
LLM_BATCH_SIZE = int(os.getenv("LLM_BATCH_SIZE", "10"))        # 1-10 ejemplos por prompt


# ─────────────────────────────────────────────
# Métricas CSW
# ─────────────────────────────────────────────
CF_WEIGHT_A = float(os.getenv("CF_WEIGHT_A", "50"))
CF_WEIGHT_B = float(os.getenv("CF_WEIGHT_B", "50"))


# ─────────────────────────────────────────────
# Corpus y entrenamiento
# ─────────────────────────────────────────────
DEFAULT_SPLIT_RATIO = os.getenv("DEFAULT_SPLIT_RATIO", "19:1")
MAX_INJECTED_ERRORS = int(os.getenv("MAX_INJECTED_ERRORS", "4"))


# ─────────────────────────────────────────────
# Decoder (valores ajustados en la validación de la etapa 3)
# ─────────────────────────────────────────────
ADDITIONAL_CONFIDENCE = float(os.getenv("ADDITIONAL_CONFIDENCE", "0"))
MIN_ERROR_PROBABILITY = float(os.getenv("MIN_ERROR_PROBABILITY", "0.4"))
MAX_ITERATIONS = int(os.getenv("MAX_ITERATIONS", "4"))

GRID_CONFIDENCE_MAX = float(os.getenv("GRID_CONFIDENCE_MAX", "0.5"))
GRID_ERROR_PROBABILITY_MAX = float(os.getenv("GRID_ERROR_PROBABILITY_MAX", "0.9"))
GRID_STEP = float(os.getenv("GRID_STEP", "0.05"))


# ─────────────────────────────────────────────
# Prompt: generación de texto CSW
# ─────────────────────────────────────────────
# {count} y {examples} se sustituyen con str.replace (los ejemplos pueden traer llaves)
CSW_PROMPT_TEMPLATE = """Settings: [no prose]
For each of the following code-switched sentences, generate a new sentence that uses the same two languages and a similar style of code-switching. The topic should be different. Ensure you use the correct grammar in the English portion of the sentence. Make sure that each sentence contains 2 languages. Only return the sentences and their number. You must follow all of the instructions.

For example, given the source sentence and label:
1. This food is called "ラーメン".
An acceptable answer would be:
1. This animal is called a "犬".

Do not include any other information in the generated sentences. The {count} real examples are as follows:

{examples}
"""
