#ifndef GLSHAP_VERSION_HPP
#define GLSHAP_VERSION_HPP

namespace glshap {

inline constexpr const char* kVersion = "0.1.0";

}

#endif
