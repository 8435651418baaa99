#include "core/object.h"

// object
