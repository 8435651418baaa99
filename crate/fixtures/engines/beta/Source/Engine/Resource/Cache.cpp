#include "Cache.h"
#include <ThirdParty/stb/stb_image.h>

// Cache
