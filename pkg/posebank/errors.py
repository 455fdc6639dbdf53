class PoseBankError(Exception):
    """
    Excepción base del paquete. No hereda de ValueError para que los
    validadores de pydantic la propaguen sin envolverla.
    """
    pass


class FieldFormatError(PoseBankError):
    """
    Archivo binario (TFF1, TFM1, TPB1 o formato crudo) con magic incorrecto,
    cabecera inconsistente o datos truncados.
    """
    pass


class InvalidFieldError(PoseBankError):
    """
    Campo de features que viola sus invariantes (densidad negativa o NaN,
    colores fuera de [0, 1], dimensiones o caja envolvente invalidas).
    """
    pass


class RegistrationError(PoseBankError):
    pass


class DimensionMismatchError(PoseBankError):
    pass


class InvalidDistributionError(PoseBankError):
    pass


class IngestError(PoseBankError):
    pass


class InvalidQueryError(PoseBankError):
    pass
