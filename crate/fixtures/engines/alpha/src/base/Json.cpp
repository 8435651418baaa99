#include "Ref.h"
#include "external/json/json.h"

// Json
