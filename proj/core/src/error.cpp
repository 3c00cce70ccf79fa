#include "cdnsim/error.hpp"

namespace cdnsim {

void throw_invalid(const std::string& what) { throw Error(ErrorKind::kInvalidInput, what); }
void throw_infeasible(const std::string& what) { throw Error(ErrorKind::kInfeasible, what); }
void throw_io(const std::string& what) { throw Error(ErrorKind::kIo, what); }

}  // namespace cdnsim
