from app.presentation.cli import main

raise SystemExit(main())
