"""Escrow-key backdoors for RSA semi-primes.

``ssb`` hides the factorization of a single semi-prime behind a secret prime
``T``; ``tsb`` does the same for a linked pair. Both modules provide
generation, verification and recovery; ``numtheory`` holds the arithmetic
they share.
"""

from .errors import (
    DomainError,
    EscrowKeyError,
    Exhausted,
    NoRoot,
    NotASquare,
    NotCoprime,
    NotInvertible,
    NotRecovered,
    TooLarge,
    TrivialFactor,
)
from .instancefile import InstanceFile
from .rsa import rsa_assemble
from .ssb import (
    EscrowKey,
    RecoveryTrace,
    SsbInstance,
    SsbParams,
    check_ssb,
    generate_escrow_key,
    ssb_generate,
    ssb_recover,
    ssb_recover_high,
    ssb_recover_low,
)
from .tsb import (
    TsbInstance,
    TsbParams,
    check_tsb,
    get_correl_prime,
    tsb_generate,
    tsb_recover,
    tsb_recover_low,
    tsb_recover_medium,
)

__version__ = "0.1.0"
