// Binary checkpoint container: magic "SCUDPARSE", format version, config,
// vocabularies, then named parameter blocks (name, shape, row-major float32).
// Loading reproduces every parameter bit-exactly; any truncation or shape
// drift is rejected with a coded error.
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "scud/parser/model.h"

namespace scud::parser {

enum class CheckpointError {
  kBadMagic,
  kBadVersion,
  kTruncated,
  kShapeMismatch,
};

class checkpoint_error : public std::runtime_error {
 public:
  checkpoint_error(CheckpointError code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  CheckpointError code() const { return code_; }

 private:
  CheckpointError code_;
};

inline constexpr uint32_t kCheckpointVersion = 1;

void save_checkpoint(const ParserModel& model, std::ostream& out);
void save_checkpoint(const ParserModel& model, const std::string& path);
ParserModel load_checkpoint(std::istream& in);
ParserModel load_checkpoint(const std::string& path);

}  // namespace scud::parser
