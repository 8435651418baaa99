#include "..\shared\util.h"
#include "sub/dir/file.h"
#include "./here.h"
#include "../up/there.h"
