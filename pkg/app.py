if __name__ == "__main__":
    from dotenv import load_dotenv

    load_dotenv()

import gc

from scripts.logging import logger

gc.collect()

if __name__ == "__main__":
    from main import app

    logger.debug("boseq starting")
    app()
