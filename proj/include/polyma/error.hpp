#pragma once

#include <stdexcept>
#include <string>

namespace polyma {

enum class Err {
    ZeroVector,
    DimensionMismatch,
    NotAFacet,
    NotABoundedEdge,
    EmptyPolyhedron,
    PointOutsideSupport,
    SupportsDiffer,
    NotARefinement,
    NotSimplicial,
    CarrierMismatch,
    WrongArity,
    UnboundedIntegrand,
    UnboundedDifference,
    NotTopFace,
    MassMismatch,
    Disconnected,
    NotPositiveAtInfinity,
    NotBoundedPerturbation,
    Infeasible,
    NotACompetitor,
    DimensionNotOne,
    InvalidMeasure,
    BadParameter,
    IoError,
};

inline const char* err_name(Err e) {
    switch (e) {
        case Err::ZeroVector: return "ZeroVector";
        case Err::DimensionMismatch: return "DimensionMismatch";
        case Err::NotAFacet: return "NotAFacet";
        case Err::NotABoundedEdge: return "NotABoundedEdge";
        case Err::EmptyPolyhedron: return "EmptyPolyhedron";
        case Err::PointOutsideSupport: return "PointOutsideSupport";
        case Err::SupportsDiffer: return "SupportsDiffer";
        case Err::NotARefinement: return "NotARefinement";
        case Err::NotSimplicial: return "NotSimplicial";
        case Err::CarrierMismatch: return "CarrierMismatch";
        case Err::WrongArity: return "WrongArity";
        case Err::UnboundedIntegrand: return "UnboundedIntegrand";
        case Err::UnboundedDifference: return "UnboundedDifference";
        case Err::NotTopFace: return "NotTopFace";
        case Err::MassMismatch: return "MassMismatch";
        case Err::Disconnected: return "Disconnected";
        case Err::NotPositiveAtInfinity: return "NotPositiveAtInfinity";
        case Err::NotBoundedPerturbation: return "NotBoundedPerturbation";
        case Err::Infeasible: return "Infeasible";
        case Err::NotACompetitor: return "NotACompetitor";
        case Err::DimensionNotOne: return "DimensionNotOne";
        case Err::InvalidMeasure: return "InvalidMeasure";
        case Err::BadParameter: return "BadParameter";
        case Err::IoError: return "IoError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(Err kind, const std::string& what)
        : std::runtime_error(std::string(err_name(kind)) + ": " + what), kind_(kind) {}
    Err kind() const { return kind_; }

  private:
    Err kind_;
};

[[noreturn]] inline void fail(Err kind, const std::string& what) { throw Error(kind, what); }

}  // namespace polyma
