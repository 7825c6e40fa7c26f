#pragma once

#include <string>
#include <string_view>

namespace ctxabuse {

// Porter suffix-stripping stemmer (steps 1a through 5b), matching the
// reference implementation's behaviour on its published test vocabulary.
// Input is expected to be lowercase ASCII letters; anything else is
// returned unchanged.
std::string porter_stem(std::string_view token);

}  // namespace ctxabuse
