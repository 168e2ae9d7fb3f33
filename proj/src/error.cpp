#include "ifp/error.hpp"

namespace ifp {

void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const OutOfRange& e) {
    throw OutOfRange(context + ": " + e.what());
  } catch (const DegenerateInput& e) {
    throw DegenerateInput(context + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(context + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(context + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(context + ": " + e.what());
  } catch (const Error& e) {
    throw Error(context + ": " + e.what());
  }
}

}  // namespace ifp
