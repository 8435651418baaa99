#include "../Platform.h"
#include <unistd.h>

// PlatformLinux
