"""Exception hierarchy shared by every module of the package."""


class PGroupError(Exception):
    pass


class CapExceeded(PGroupError):
    def __init__(self, cap, what="elements"):
        super().__init__(f"more than {cap} {what}")
        self.cap = cap


class OrderCapExceeded(CapExceeded):
    def __init__(self, order, cap):
        PGroupError.__init__(self, f"group order {order} exceeds cap {cap}")
        self.cap = cap
        self.order = order


class NotPPower(PGroupError):
    pass


class ParentMismatch(PGroupError):
    pass


class NotNormal(PGroupError):
    pass


class NotPowerful(PGroupError):
    pass


class SpecMismatch(PGroupError):
    pass


class InvalidSpec(PGroupError):
    pass


class PrimeMismatch(InvalidSpec):
    pass


class NotInKernel(PGroupError):
    pass


class ConsistencyFailure(PGroupError):
    pass


class ParseError(PGroupError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position
