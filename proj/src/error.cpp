#include "fhn/error.hpp"

#include <sstream>

namespace fhn {

BlowUpError::BlowUpError(double time, const std::string& what)
    : Error(what), time_(time) {}

namespace {
std::string bracket_message(double lo, double hi, double f_lo, double f_hi,
                            const std::string& what) {
  std::ostringstream os;
  os.precision(12);
  os << what << " [bracket (" << lo << ", " << hi << "), values (" << f_lo << ", " << f_hi
     << ")]";
  return os.str();
}
}  // namespace

BracketError::BracketError(double lo_, double hi_, double f_lo_, double f_hi_,
                           const std::string& what)
    : Error(bracket_message(lo_, hi_, f_lo_, f_hi_, what)),
      lo(lo_),
      hi(hi_),
      f_lo(f_lo_),
      f_hi(f_hi_) {}

}  // namespace fhn
