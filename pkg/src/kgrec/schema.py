"""Vehicle-domain vocabulary used by the synthetic data, the explainer and the CLI."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from .graph import IRI, RDF_TYPE as _RDF_TYPE, RDFS_SUBCLASS_OF as _SUBCLASS, Term

VEH = "http://example.org/vehicle#"
TYPE = IRI(_RDF_TYPE)
SUBCLASS_OF = IRI(_SUBCLASS)
DATA = "http://example.org/data/"


def veh(name: str) -> Term:
    return IRI(VEH + name)


def data(name: str) -> Term:
    return IRI(DATA + name)


@dataclass(frozen=True)
class Feature:
    """A comparable property, named for display and paired across user and item."""

    name: str
    user_predicate: Term
    item_predicate: Term
    numeric: bool = False


PRICE = veh("price")
TRANSMISSION = veh("transmission")
BODY_STYLE = veh("bodyStyle")
FUEL_TYPE = veh("fuelType")
MILEAGE = veh("mileage")
SEATS = veh("numberOfSeats")

# Display order of explanation rows.
FEATURES: Tuple[Feature, ...] = (
    Feature("Price", PRICE, PRICE, True),
    Feature("Transmission", TRANSMISSION, TRANSMISSION),
    Feature("Body Style", BODY_STYLE, BODY_STYLE),
    Feature("Fuel Type", FUEL_TYPE, FUEL_TYPE),
    Feature("Mileage", MILEAGE, MILEAGE, True),
    Feature("Number of Seats", SEATS, SEATS, True),
)

RELATION_TYPES: Tuple[Term, ...] = tuple(f.item_predicate for f in FEATURES)

USER_PREDICATES: Tuple[Term, ...] = tuple(f.user_predicate for f in FEATURES)
ITEM_PREDICATES: Tuple[Term, ...] = tuple(f.item_predicate for f in FEATURES) + (TYPE,)

VEHICLE = veh("Vehicle")
ECO_FRIENDLY = veh("EcoFriendlyVehicle")
ELECTRIC_CAR = veh("ElectricCar")
HYBRID_CAR = veh("HybridCar")
COMBUSTION_CAR = veh("CombustionCar")
USER_CLASS = veh("Customer")

# Fuel type value -> vehicle class.
FUEL_CLASS = {
    "Electric": ELECTRIC_CAR,
    "Hybrid": HYBRID_CAR,
    "Petrol": COMBUSTION_CAR,
    "Diesel": COMBUSTION_CAR,
}

# (subclass, superclass) axioms.
CLASS_HIERARCHY = (
    (ELECTRIC_CAR, ECO_FRIENDLY),
    (HYBRID_CAR, ECO_FRIENDLY),
    (ECO_FRIENDLY, VEHICLE),
    (COMBUSTION_CAR, VEHICLE),
)
