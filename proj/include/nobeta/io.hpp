#pragma once

#include "nobeta/body.hpp"
#include "nobeta/cones.hpp"
#include "nobeta/derivative.hpp"
#include "nobeta/faces.hpp"
#include "nobeta/game.hpp"
#include "nobeta/target.hpp"

#include <json.hpp>

#include <string>

namespace nobeta::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kRunRecordSchema = "nobeta.runrecord/1";

// Loader failure; pointer is the RFC 6901 path of the offending field.
class JsonError : public InvalidArgument {
 public:
  JsonError(const std::string& pointer, const std::string& what)
      : InvalidArgument(pointer + ": " + what), pointer_(pointer) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

// Parses text; syntax errors become JsonError with the byte offset.
Json parse(const std::string& text);
// Canonical output: fields in declaration order, no whitespace, trailing newline.
std::string dump(const Json& j);

Json toJson(const Vec& v);
Vec vecFromJson(const Json& j, const std::string& ptr = "");
Json toJson(const std::vector<Vec>& pts);
std::vector<Vec> pointsFromJson(const Json& j, const std::string& ptr = "");

Json toJson(const ConvexBody& P);
ConvexBody bodyFromJson(const Json& j);

Json toJson(const TargetSet& t);
TargetSet targetFromJson(const Json& j);

Json toJson(const Homothet& h);
Homothet homothetFromJson(const Json& j, const std::string& ptr = "");

Json toJson(const Move& m);
Move moveFromJson(const Json& j, const std::string& ptr = "");
Json toJson(const Violation& v);

Json toJson(const RunRecord& r);
RunRecord runRecordFromJson(const Json& j);

Json toJson(const GoodCopyCertificate& c);
Json toJson(const BadBall& b);
Json toJson(const StepResult& s);
Json toJson(const DerivativeTrace& t, bool certificates = true);

Json toJson(const FaceLattice& L);
FaceLattice latticeFromJson(const Json& j);

Json toJson(const ConeFamily& f);
Json toJson(const ColoredPointSet& c);
ColoredPointSet coloredFromJson(const Json& j);
Json toJson(const ThinningResult& r);

Json toJson(const ExtractResult& r);

}  // namespace nobeta::io
