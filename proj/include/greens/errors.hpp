#pragma once

#include <stdexcept>
#include <string>

namespace greens {

enum class Err {
  InvalidConfig,
  NotInDomain,
  AmbiguousProjection,
  UnsupportedBoundary,
  EmptyGrid,
  Singular,
  OutsideExterior,
  TruncationFailure,
  QuadratureUnderResolved,
  OutsideStrip,
  NotInPerforatedDomain,
  DenominatorDegenerate,
  ConstraintViolated,
  NotInRod,
  NotInTruncatedSector,
  HolesOverlap,
  BadRadii,
  OutsideRod,
  OutsideSector,
  IllConditioned,
  InsufficientData,
  ZeroError,
  MissingStratum,
  WrongDimension,
};

const char* to_string(Err code);

/// Library-wide exception. `code` identifies the failed contract.
class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

inline const char* to_string(Err code) {
  switch (code) {
    case Err::InvalidConfig: return "InvalidConfig";
    case Err::NotInDomain: return "NotInDomain";
    case Err::AmbiguousProjection: return "AmbiguousProjection";
    case Err::UnsupportedBoundary: return "UnsupportedBoundary";
    case Err::EmptyGrid: return "EmptyGrid";
    case Err::Singular: return "Singular";
    case Err::OutsideExterior: return "OutsideExterior";
    case Err::TruncationFailure: return "TruncationFailure";
    case Err::QuadratureUnderResolved: return "QuadratureUnderResolved";
    case Err::OutsideStrip: return "OutsideStrip";
    case Err::NotInPerforatedDomain: return "NotInPerforatedDomain";
    case Err::DenominatorDegenerate: return "DenominatorDegenerate";
    case Err::ConstraintViolated: return "ConstraintViolated";
    case Err::NotInRod: return "NotInRod";
    case Err::NotInTruncatedSector: return "NotInTruncatedSector";
    case Err::HolesOverlap: return "HolesOverlap";
    case Err::BadRadii: return "BadRadii";
    case Err::OutsideRod: return "OutsideRod";
    case Err::OutsideSector: return "OutsideSector";
    case Err::IllConditioned: return "IllConditioned";
    case Err::InsufficientData: return "InsufficientData";
    case Err::ZeroError: return "ZeroError";
    case Err::MissingStratum: return "MissingStratum";
    case Err::WrongDimension: return "WrongDimension";
  }
  return "UnknownError";
}

}  // namespace greens
