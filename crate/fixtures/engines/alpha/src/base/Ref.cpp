#include "Ref.h"
#include <atomic>

// Ref
