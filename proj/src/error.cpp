#include "vcage/error.hpp"

namespace vcage {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::duplicate_id: return "DuplicateId";
    case ErrorCode::placement_conflict: return "PlacementConflict";
    case ErrorCode::placement_exhausted: return "PlacementExhausted";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::validation_error: return "ValidationError";
    case ErrorCode::retrieval_error: return "RetrievalError";
    case ErrorCode::unsatisfiable_relation: return "UnsatisfiableRelation";
    case ErrorCode::missing_object: return "MissingObject";
    case ErrorCode::out_of_bounds: return "OutOfBounds";
    case ErrorCode::grounding_error: return "GroundingError";
    case ErrorCode::binding_error: return "BindingError";
    case ErrorCode::transport_error: return "TransportError";
    case ErrorCode::protocol_error: return "ProtocolError";
    case ErrorCode::gate_error: return "GateError";
    case ErrorCode::missing_annotations: return "MissingAnnotations";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::schema_error: return "SchemaError";
    case ErrorCode::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace vcage
