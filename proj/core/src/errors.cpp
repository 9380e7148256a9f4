#include "krflow/errors.hpp"

// Error types are header-only; this translation unit anchors the vtable.
namespace krflow {
namespace {
[[maybe_unused]] const Error* anchor = nullptr;
}
} // namespace krflow
