import hashlib
import hmac
from abc import ABC, abstractmethod


class OuterSigner(ABC):
    """
    OuterSigner abstract class, the conventional signature binding
    `(h_L, adm)`.

    Providers have fixed sizes given by the class attributes `name`,
    `pk_bytes`, `sk_bytes` and `sig_bytes`.
    """

    name = None
    pk_bytes = None
    sk_bytes = None
    sig_bytes = None

    @abstractmethod
    def keygen(self, rng):
        """
        Generate a key pair.

        :param rng: RandomSource, randomness.
        :return: tuple, `(outer_pk, outer_sk)` byte strings.
        """
        pass

    @abstractmethod
    def sign(self, outer_sk, message):
        """
        Sign `message`.

        :param outer_sk: bytes, secret key.
        :param message: bytes, message.
        :return: bytes, signature of `sig_bytes` bytes.
        """
        pass

    @abstractmethod
    def verify(self, outer_pk, message, signature):
        """
        Verify a signature.

        :param outer_pk: bytes, public key.
        :param message: bytes, message.
        :param signature: bytes, signature.
        :return: bool, `True` if `signature` is valid.
        """
        pass


class SimulatedDilithium2(OuterSigner):
    """
    Size-faithful stand-in for Dilithium2.

    The public key starts with the MAC key `SHA3-256(sk)` and signatures
    are HMAC-SHA3-256 tags stretched with SHAKE-256. Anybody holding the
    public key can produce signatures; it reproduces the byte counts of
    Dilithium2, not its security.
    """

    name = 'simulated-dilithium2'
    pk_bytes = 1312
    sk_bytes = 32
    sig_bytes = 2420

    _label = b'mceliece-sss/simulated-dilithium2'

    def keygen(self, rng):
        outer_sk = rng.random_bytes(self.sk_bytes)
        return self._public_from_secret(outer_sk), outer_sk

    def _public_from_secret(self, outer_sk):
        key = hashlib.sha3_256(outer_sk).digest()
        padding = hashlib.shake_256(self._label + b'/pk' + key)
        return key + padding.digest(self.pk_bytes - len(key))

    def _signature(self, key, message):
        tag = hmac.new(key, message, hashlib.sha3_256).digest()
        padding = hashlib.shake_256(self._label + b'/sig' + tag)
        return tag + padding.digest(self.sig_bytes - len(tag))

    def sign(self, outer_sk, message):
        if len(outer_sk) != self.sk_bytes:
            raise ValueError(f'Secret key must have {self.sk_bytes} bytes, '
                             f'got {len(outer_sk)}.')
        return self._signature(hashlib.sha3_256(outer_sk).digest(), message)

    def verify(self, outer_pk, message, signature):
        if len(outer_pk) != self.pk_bytes or \
                len(signature) != self.sig_bytes:
            return False
        expected = self._signature(outer_pk[:32], message)
        return hmac.compare_digest(expected, signature)


outer_signer_mapping = {
    SimulatedDilithium2.name: SimulatedDilithium2,
}
